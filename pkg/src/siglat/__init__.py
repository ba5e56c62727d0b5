"""Sigma-permutable subgroup lattices of finite permutation groups.

Groups are enumerated in full; subgroups are bitmasks over the element
table. See ``siglat.report.analyze`` for the one-call entry point.
"""

from .corpus import GroupSpec, builtin_corpus, corpus_by_name, parse_group_file, parse_group_text
from .errors import CapExceeded, ParseError, SiglatError
from .perm import Group, Permutation, SubgroupHandle, generate_group, parse_cycles
from .report import AnalysisReport, analyze
from .sigma import SIGMA0, PrimePartition, parse_partition

__all__ = [
    "AnalysisReport",
    "CapExceeded",
    "Group",
    "GroupSpec",
    "ParseError",
    "Permutation",
    "PrimePartition",
    "SIGMA0",
    "SiglatError",
    "SubgroupHandle",
    "analyze",
    "builtin_corpus",
    "corpus_by_name",
    "generate_group",
    "parse_cycles",
    "parse_group_file",
    "parse_group_text",
    "parse_partition",
]
