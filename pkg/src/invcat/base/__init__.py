"""Base categories: finite presheaves on the truncated simplex category."""
from .presheaf import (
    STAR, DepProduct, Exponential, Limit, PMap, Presheaf, Pullback, compose, coproduct,
    dep_product, discrete, empty, finmap, finset, from_empty, from_function, group_nerve,
    identity, inclusion, limit, monotone_maps, product, pullback, representable,
    require_equal, sort_key, sorted_labels, subobject, terminal, to_terminal, yoneda,
)
from .instances import BaseCat, FinSetBase, SSetBase, Verdict, horns, instance, instance_for, kan_check
