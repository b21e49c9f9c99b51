"""Exception hierarchy shared across the pipeline.

Every error carries the name of the subsystem that raised it so the CLI
can emit module-tagged diagnostics.
"""


class PipelineError(Exception):
    """Base class for all errors raised by this package."""

    module = "rankdiff"


class IngestError(PipelineError):
    module = "ingest"


class MetricsError(PipelineError):
    module = "metrics"


class ClassifyError(PipelineError):
    module = "classify"


class RenderError(PipelineError):
    module = "render"


class SynthError(PipelineError):
    module = "synth"


class ConfigError(PipelineError):
    module = "cli"
