"""Rigged-configuration models of crystals for symmetrizable Kac-Moody algebras."""

from .cartan import (
    CartanDatum,
    CartanError,
    FoldingDatum,
    MultiplicityArray,
    Weight,
    build_cartan,
    canonicalize_weight,
    folding,
    folding_for,
    format_weight,
    pairing,
    parse_weight,
    positive_roots,
    weyl_dimension,
)
from .rigged import (
    HighestWeightModel,
    InfinityModel,
    Model,
    RiggedConfiguration,
    RiggedPartition,
    colabel,
    decode,
    encode,
    highest_weight_empty,
    infinity_empty,
    is_highest_weight,
    is_valid,
    vacancy,
    weight,
)
from .kashiwara import apply_string, e, epsilon, f, f_string, lift, phi
from .combinators import (
    NEG_INF,
    CElement,
    RCElement,
    TElement,
    TensorElement,
    ZElement,
    project,
    recognition_check,
    tensor_e,
    tensor_eps,
    tensor_f,
    tensor_phi,
    tensor_wt,
)
from .virtualization import (
    devirtualize,
    embed_weight,
    in_virtual_image,
    virtual_e,
    virtual_f,
    virtualize,
    virtualize_elementary,
)
from .graph import BudgetExceeded, CrystalGraph, character, count, generate, same_graph, to_dot, to_json

__all__ = [name for name in dir() if not name.startswith("_")]
