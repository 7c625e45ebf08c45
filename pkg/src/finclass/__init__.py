"""finclass: finite classical groups over small fields.

Exact arithmetic in GF(p^e), classical forms and matrix groups with a
Schreier-Sims order engine, almost-free embeddings of finite 2-groups,
exact counting of involutions / order-4 elements / Klein four-subgroups
and totally singular subspaces, fixed-point-ratio identities, and
seeded conjugate-pair generation experiments.
"""

from .gf import FieldElement, FieldSpec, arith, field_of_size, frobenius, make_field
from .matrix import Matrix
from .forms import FormedSpace, formed_space, preserves_form
from .groups import (GroupAtlas, GroupSpec, atlas, group_order, parse_group,
                     standard_form, standard_generators)
from .bsgs import bsgs_order
from .embed import (Decomposition, Embedding, TwoGroup, almost_free_decompose,
                    embed_almost_free, klein_subgroup, parse_two_group,
                    regular_representation)
from .census import (JordanType, count_klein_subgroups, count_order_elements,
                     nilpotent_block_count, psi, psi_oracle, rank_count,
                     sn_klein_count, sn_order4_count, totally_singular_count,
                     unipotent_centralizer_order)
from .flagfix import (ClassData, SubspaceBasis, class_intersection, class_size,
                      enumerate_totally_singular, fix_count, fpr_check,
                      parabolic_bound_report)
from .genlab import (GenerationExperiment, SubgroupCatalogEntry, criterion_sum,
                     generates, i2_ratio_report, load_catalog,
                     run_generation_experiment, zeta)
from .report import CountReport, build_reports, count_report

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
