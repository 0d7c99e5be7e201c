"""Configuration generation: shapes, exact covers, counting and sampling."""
from irrarray.tiling._kernel import BACKEND
from irrarray.tiling.config import ArrayConfig, connection_matrix, fill_factor, fpra, read_configs, write_configs
from irrarray.tiling.counting import count_domino, count_thinned, count_thinned_truncated, sci_truncated
from irrarray.tiling.exact_cover import DictionaryMatrix, Placement, build_dictionary, count_exact_covers, enumerate_exact_covers
from irrarray.tiling.shapes import DOMINO, SHAPE_SETS, TETROMINO, ShapeSet
from irrarray.tiling.thinned import ThinnedSpace, sample_thinned

__all__ = [
    "BACKEND",
    "ArrayConfig",
    "DOMINO",
    "DictionaryMatrix",
    "Placement",
    "SHAPE_SETS",
    "ShapeSet",
    "TETROMINO",
    "ThinnedSpace",
    "build_dictionary",
    "connection_matrix",
    "count_domino",
    "count_exact_covers",
    "count_thinned",
    "count_thinned_truncated",
    "enumerate_exact_covers",
    "fill_factor",
    "fpra",
    "read_configs",
    "sample_thinned",
    "sci_truncated",
    "write_configs",
]
