"""Crystal-axiom and vacancy-convexity checks over collections of rigged configurations."""
from __future__ import annotations

from .cartan import pairing
from . import kashiwara as K
from .rigged import Model, configuration_identity_holds, is_valid, vacancy, weight
from .cartan import Weight


def convexity_violations(rc) -> list:
    """Positions ``(a, i)`` with no length-i string where ``2 p_i < p_{i-1} + p_{i+1}``."""
    top = max((i for p in rc.parts for i, _ in p.strings), default=0) + 1
    bad = []
    for a, part in zip(rc.datum.labels, rc.parts):
        mult = part.multiplicities()
        for i in range(1, top + 1):
            if mult.get(i, 0):
                continue
            if 2 * vacancy(rc, a, i) < vacancy(rc, a, i - 1) + vacancy(rc, a, i + 1):
                bad.append((a, i))
    return bad


def crystal_axiom_violations(elements, check_fast_path: bool = True) -> list:
    """Human-readable descriptions of every failed axiom on ``elements``."""
    out = []
    for x in elements:
        datum = x.datum
        wt = weight(x)
        if not configuration_identity_holds(x):
            out.append(f"weight identity fails on {x.parts}")
        for a in datum.labels:
            alpha = Weight.simple_root(a)
            eps, ph = K.epsilon(a, x), K.phi(a, x)
            if ph - eps != pairing(datum, a, wt):
                out.append(f"phi - eps != <h_{a}, wt> on {x.parts}")
            if eps != K.epsilon_iterative(a, x):
                out.append(f"closed-form eps_{a} differs from iteration on {x.parts}")
            if x.mode is Model.HIGHEST_WEIGHT and ph != K.phi_iterative(a, x):
                out.append(f"closed-form phi_{a} differs from iteration on {x.parts}")
            up = K.e(a, x)
            if up is not None:
                if K.f(a, up) != x:
                    out.append(f"f_{a} e_{a} != id on {x.parts}")
                if weight(up) != wt + alpha:
                    out.append(f"wt(e_{a} x) != wt(x) + alpha_{a} on {x.parts}")
                if x.mode is Model.HIGHEST_WEIGHT and not is_valid(up):
                    out.append(f"e_{a} produced an invalid configuration from {x.parts}")
                if check_fast_path and datum.is_symmetric and K.e(a, x, fast=False) != up:
                    out.append(f"fast and full rigging updates differ for e_{a} on {x.parts}")
            down = K.f(a, x)
            if down is not None:
                if K.e(a, down) != x:
                    out.append(f"e_{a} f_{a} != id on {x.parts}")
                if weight(down) != wt - alpha:
                    out.append(f"wt(f_{a} x) != wt(x) - alpha_{a} on {x.parts}")
                if K.epsilon(a, down) != eps + 1 or K.phi(a, down) != ph - 1:
                    out.append(f"eps/phi do not step under f_{a} on {x.parts}")
                if check_fast_path and datum.is_symmetric and K.f(a, x, fast=False) != down:
                    out.append(f"fast and full rigging updates differ for f_{a} on {x.parts}")
        for a, i in convexity_violations(x):
            out.append(f"vacancy convexity fails at ({a}, {i}) on {x.parts}")
    return out
