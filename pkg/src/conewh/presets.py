"""Named cones and symbols used by the CLI and the acceptance experiments.

Symbol presets carry oracle metadata where a closed form exists: the
expected winding under the frozen curve orientation, computed independently
from the upper-half-plane zero/pole counts of the rational symbol (winding
= poles_upper - zeros_upper for the xi-decreasing traversal).
"""

import numpy as np

from .cones import PolyhedralCone, cone_from_generators
from .errors import ConfigError
from .wiener_hopf import SymbolGrid, make_symbol

_EXP_CLIP = 60.0  # arguments beyond this give exp underflow warnings only


def _exp_pos(x):
    return np.where(x > 0, np.exp(-np.minimum(np.abs(x), _EXP_CLIP)), 0.0)


def _exp_neg(x):
    return np.where(x < 0, np.exp(-np.minimum(np.abs(x), _EXP_CLIP)), 0.0)


def _gauss(x):
    return np.exp(-np.pi * x**2)


# -- cones -------------------------------------------------------------------

def cone_preset(name: str) -> PolyhedralCone:
    try:
        rays, n = _CONES[name]
    except KeyError:
        raise ConfigError(f"unknown cone preset '{name}' (have {sorted(_CONES)})")
    return cone_from_generators(rays, n)


_CONES = {
    "half-line": ([(1,)], 1),
    "quarter-plane": ([(1, 0), (0, 1)], 2),
    "simplicial-r3": ([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 3),
    "fourgonal-r3": ([(1, 1, 1), (-1, 1, 1), (-1, -1, 1), (1, -1, 1)], 3),
}


# -- 1-D symbols --------------------------------------------------------------
# Blaschke building blocks: b(xi) = (2 pi i xi - 1)/(2 pi i xi + 1) has the
# kernel -2 e^{-x} 1_{x>0}; its conjugate reciprocal has the mirrored kernel.
# Jump kernels are sampled with the midpoint value at x = 0.


def _blaschke_minus(x):  # symbol b: winding +1 under the frozen orientation
    return np.where(x == 0, -1.0, -2.0 * _exp_pos(x))


def _blaschke_plus(x):   # symbol 1/b: winding -1
    return np.where(x == 0, -1.0, -2.0 * _exp_neg(x))


def _blaschke_minus_sq(x):  # b^2: winding +2, kernel 4 e^{-x}(x-1) 1_{x>0}
    return np.where(x == 0, -2.0, 4.0 * _exp_pos(x) * (x - 1.0))


def _blaschke_plus_sq(x):   # 1/b^2: winding -2, kernel 4 e^{x}(-x-1) 1_{x<0}
    return np.where(x == 0, -2.0, 4.0 * _exp_neg(x) * (-x - 1.0))


_SYMBOLS_1D = {
    # name: (callable, expected winding or None, description)
    "zero": (lambda x: np.zeros_like(x, dtype=float), 0, "identity operator"),
    "rational-w-1": (_blaschke_plus, -1, "(2 pi i xi+1)/(2 pi i xi-1)"),
    "rational-w+1": (_blaschke_minus, +1, "(2 pi i xi-1)/(2 pi i xi+1)"),
    "rational-w-2": (_blaschke_plus_sq, -2, "((2 pi i xi+1)/(2 pi i xi-1))^2"),
    "rational-w+2": (_blaschke_minus_sq, +2, "((2 pi i xi-1)/(2 pi i xi+1))^2"),
    "gauss-small": (lambda x: 0.3 * _gauss(x), 0, "0.3 exp(-pi x^2)"),
    "gauss-neg": (lambda x: -0.4 * _gauss(x), 0, "-0.4 exp(-pi x^2)"),
    "singular-zero": (lambda x: -_gauss(x), None, "symbol vanishing at xi=0"),
}

# upper-half-plane (zeros, poles) counts of 1 + fhat, for the winding oracle
RATIONAL_ZERO_POLE = {
    "rational-w-1": (1, 0),
    "rational-w+1": (0, 1),
    "rational-w-2": (2, 0),
    "rational-w+2": (0, 2),
    "zero": (0, 0),
}


# -- 2-D symbols --------------------------------------------------------------


def _gauss2(x, y):
    return np.exp(-np.pi * (x**2 + y**2))


def _separable_singular(x, y):
    # singular 1-D factor (symbol hits -1 at xi = 0) times a unit-mass factor
    return -_gauss(x) * _gauss(y)


_SYMBOLS_2D = {
    "gauss2d": (_gauss2, "exp(-pi |x|^2)"),
    "gauss2d-small": (lambda x, y: 0.3 * _gauss2(x, y), "0.3 exp(-pi |x|^2)"),
    "separable-singular-face": (_separable_singular,
                                "modulated Gaussian with a singular e1-face symbol"),
}


def symbol_preset(name, h, T) -> SymbolGrid:
    if name in _SYMBOLS_1D:
        f, winding, desc = _SYMBOLS_1D[name]
        sym = make_symbol(f, 1, h, T, name=name)
        sym.meta.update({"expected_winding": winding, "description": desc})
        if name in RATIONAL_ZERO_POLE:
            z, p = RATIONAL_ZERO_POLE[name]
            sym.meta["winding_oracle"] = p - z
        return sym
    if name in _SYMBOLS_2D:
        f, desc = _SYMBOLS_2D[name]
        sym = make_symbol(f, 2, h, T, name=name)
        sym.meta["description"] = desc
        return sym
    raise ConfigError(
        f"unknown symbol preset '{name}' "
        f"(have {sorted(_SYMBOLS_1D) + sorted(_SYMBOLS_2D)})")


def symbol_from_expression(expr, dim, h, T, name="expr") -> SymbolGrid:
    """Kernel from an expression string in x (and y for dim 2).

    The expression is evaluated with numpy under a restricted namespace:
    exp, cos, sin, sqrt, abs, where, pi, e.
    """
    ns = {"exp": np.exp, "cos": np.cos, "sin": np.sin, "sqrt": np.sqrt,
          "abs": np.abs, "where": np.where, "pi": np.pi, "e": np.e}

    def f(*coords):
        local = dict(ns)
        local["x"] = coords[0]
        if dim == 2:
            local["y"] = coords[1]
        try:
            return eval(expr, {"__builtins__": {}}, local)  # noqa: S307 - restricted
        except Exception as exc:
            raise ConfigError(f"bad symbol expression: {exc}")

    return make_symbol(f, dim, h, T, name=name)


def resolve_symbol(spec, h, T) -> SymbolGrid:
    """Symbol from a preset name or {'expr': ..., 'dim': ...} object."""
    if isinstance(spec, str):
        return symbol_preset(spec, h, T)
    if isinstance(spec, dict) and "expr" in spec:
        return symbol_from_expression(spec["expr"], int(spec.get("dim", 1)), h, T,
                                      name=spec.get("name", "expr"))
    raise ConfigError("symbol must be a preset name or an expression object")
