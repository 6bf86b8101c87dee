"""Figure rendering for the lossy-chain study datasets."""

from .recipes import RECIPES, FigureRecipe
from .render import RenderResult, render

__version__ = "0.1.0"
