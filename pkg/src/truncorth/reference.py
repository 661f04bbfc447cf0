"""Reference values for the small-N tables (L_i = 4), in reduced exact form.

``TABLE1[(N, m)][k]`` is ``p_{N,k}`` and ``TABLE2[(N, m)]`` the expected real
count.  These are the exact values; three cells of the commonly quoted
typeset version carry digit slips, listed in ``TYPESET_SLIPS``.
"""
from __future__ import annotations

from typing import Dict, Tuple

from .correlation import EnsembleSpec, expected_reals_exact, generating_function
from .exact import format_float

__all__ = ["TABLE1", "TABLE2", "TYPESET_SLIPS", "table_specs", "render_tables"]

TABLE1: Dict[Tuple[int, int], Dict[int, str]] = {
    (2, 1): {0: "11/35", 2: "24/35"},
    (2, 2): {0: "30641/128625", 2: "97984/128625"},
    (2, 3): {0: "29654713/157565625", 2: "127910912/157565625"},
    (3, 1): {1: "73/105", 3: "32/105"},
    (3, 2): {1: "1968107/3472875", 3: "1504768/3472875"},
    (3, 3): {1: "18344527259/38288446875", 3: "19943919616/38288446875"},
    (4, 1): {0: "421/2205", 2: "17576/24255", 4: "2048/24255"},
    (4, 2): {
        0: "24149151605489/214040075720625",
        2: "152493653488832/214040075720625",
        4: "37397270626304/214040075720625",
    },
    (4, 3): {
        0: "1431169011017974588501/19078916984518815703125",
        2: "140868762431563179004928/209868086829706972734375",
        4: "53256465276946073255936/209868086829706972734375",
    },
}

TABLE2: Dict[Tuple[int, int], str] = {
    (2, 1): "48/35",
    (2, 2): "195968/128625",
    (2, 3): "255821824/157565625",
    (3, 1): "169/105",
    (3, 2): "6482411/3472875",
    (3, 3): "78176286107/38288446875",
    (4, 1): "688/385",
    (4, 2): "9817004416/4622396625",
    (4, 3): "14537252216952832/6166392657665625",
}

# (N, m, k) -> value as typeset
TYPESET_SLIPS: Dict[Tuple[int, int, int], str] = {
    (3, 2, 1): "10968107/3472875",
    (4, 2, 4): "37379270626304/214040075720625",
    (3, 3, 1): "18344527259/38288466875",
}


def table_specs():
    for N in (2, 3, 4):
        for m in (1, 2, 3):
            yield N, m, EnsembleSpec(N, (4,) * m)


def render_tables() -> str:
    """Both tables recomputed, as fixed-format text (byte-stable)."""
    lines = ["# p_{N,k}, L_i = 4", "N,m,k,exact,float"]
    for N, m, spec in table_specs():
        Z = generating_function(spec)
        for k in range(N % 2, N + 1, 2):
            c = Z.coefficient(k)
            lines.append(f"{N},{m},{k},{c.to_text()},{format_float(float(c.rational()))}")
    lines += ["", "# E[number of real eigenvalues], L_i = 4", "N,m,exact,float"]
    for N, m, spec in table_specs():
        e = expected_reals_exact(spec)
        lines.append(f"{N},{m},{e.to_text()},{format_float(float(e.rational()))}")
    return "\n".join(lines) + "\n"
