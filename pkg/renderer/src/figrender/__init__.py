"""Batch figure renderer for the off-switch incentive CSV artifacts."""

from .render import FigureSpec, RenderError, RenderResult, load_spec, render

__version__ = "0.1.0"
