from .fixtures import FIXTURE_KINDS, build_fixture, link_span
from .membership import (
    InequalityRecord,
    MembershipReport,
    is_larson_member,
    membership,
    product_inequality_check,
)
from .seminorms import SeminormProfile, cell_profile, diag_seminorm, liminal, rinf_seminorm, window_norm
from .space import (
    Block,
    BlockOperator,
    BlockPair,
    Link,
    Marker,
    ModelSpace,
    NestPrefix,
    Truncation,
    project,
)

__all__ = [
    "FIXTURE_KINDS",
    "Block",
    "BlockOperator",
    "BlockPair",
    "InequalityRecord",
    "Link",
    "Marker",
    "MembershipReport",
    "ModelSpace",
    "NestPrefix",
    "SeminormProfile",
    "Truncation",
    "build_fixture",
    "cell_profile",
    "diag_seminorm",
    "is_larson_member",
    "liminal",
    "link_span",
    "membership",
    "product_inequality_check",
    "project",
    "rinf_seminorm",
    "window_norm",
]
