"""Python bindings for the axisymmetric Landau-de Gennes droplet solver.

Fields are numpy arrays of shape (n + 1, n + 1, 3) indexed [j, i, k]: z row,
rho column, component (u1, u2, u3).
"""

from ._core import (
    LdgError,
    c_mu,
    classify,
    d_a,
    eigenvalues,
    energy,
    h_a,
    hedgehog_alpha,
    lift,
    p_invariant,
    read_field,
    s_invariant,
    solve,
    write_field,
)

__all__ = [
    "LdgError",
    "c_mu",
    "classify",
    "d_a",
    "eigenvalues",
    "energy",
    "h_a",
    "hedgehog_alpha",
    "lift",
    "p_invariant",
    "read_field",
    "s_invariant",
    "solve",
    "write_field",
]
