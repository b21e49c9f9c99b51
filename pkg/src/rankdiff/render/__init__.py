"""Static SVG/HTML rendering of dashboards, rank overlays, and the map."""

from .choropleth import ChoroplethModel, build_choropleth, render_choropleth
from .dashboard import DashboardModel, build_dashboard, render_dashboard, render_rank_overlay
from .index_page import render_index
from .svg import CLASS_COLORS, GROUP_COLORS, pie_angles

__all__ = [
    "ChoroplethModel",
    "DashboardModel",
    "build_choropleth",
    "build_dashboard",
    "render_choropleth",
    "render_dashboard",
    "render_index",
    "render_rank_overlay",
    "pie_angles",
    "CLASS_COLORS",
    "GROUP_COLORS",
]
