"""Search for polyominoes that fold into one or more boxes in several ways."""

from .campaign import CampaignConfig, ResultRecord, ResultStore, run_campaign, stats
from .cnf import CnfFormula, read_dimacs, write_dimacs
from .decode import DecodeError, decode
from .encoder import BoardSpec, EncodeConfig, VarMap, blocking_clause, encode, prune_mask
from .folding import FoldingMap, count_foldings, creases
from .geometry import BoxSpec, BoxSurface, Direction, build_surface, rotation_group
from .polyomino import Polyomino, canonical_form, enumerate_polyominoes, is_connected
from .render import render
from .solver import SolverConfig, SolverVerdict, solve

__version__ = "0.1.0"

__all__ = [
    "BoardSpec",
    "BoxSpec",
    "BoxSurface",
    "CampaignConfig",
    "CnfFormula",
    "DecodeError",
    "Direction",
    "EncodeConfig",
    "FoldingMap",
    "Polyomino",
    "ResultRecord",
    "ResultStore",
    "SolverConfig",
    "SolverVerdict",
    "VarMap",
    "blocking_clause",
    "build_surface",
    "canonical_form",
    "count_foldings",
    "creases",
    "decode",
    "encode",
    "enumerate_polyominoes",
    "is_connected",
    "prune_mask",
    "read_dimacs",
    "render",
    "rotation_group",
    "run_campaign",
    "solve",
    "stats",
    "write_dimacs",
]
