from fractions import Fraction as F

import pytest
import sympy
from sympy.parsing.sympy_parser import (
    implicit_multiplication_application,
    parse_expr,
    standard_transformations,
)
from hypothesis import given, strategies as st

from bwkit import catalog
from bwkit.bounds import lower_bound, psi, upper_bound
from bwkit.catalog import CapacityModel, Interval
from bwkit.errors import MissingCapacity, WrongFamilies
from bwkit.factors import central_cut, normalized_congestion
from bwkit.graph import Kind, ProductSpec, cartesian_product, factor
from bwkit.oracle import exact_bisection_width

k_, d_, T_, s_, psi_ = sympy.symbols("k d T s Psi", positive=True)


TRANSFORMS = standard_transformations + (implicit_multiplication_application,)


def parse(cell):
    text = cell.replace("^", "**").replace("·", "*").replace("Ψ(α)", "Psi")
    return parse_expr(text, local_dict={"k": k_, "d": d_, "T": T_, "s": s_, "Psi": psi_},
                      transformations=TRANSFORMS)


def to_fraction(x):
    x = sympy.nsimplify(x)
    return F(int(x.p), int(x.q))


# --- closed forms ----------------------------------------------------------


@pytest.mark.parametrize("name,dims,bw", [
    ("torus", (4, 4), 8),
    ("torus", (3, 3), 8),
    ("array", (3, 3), 4),
    ("array", (5, 4, 2), 10),
    ("mcx", (7,), 2),
    ("mct", (7, 3), 4),
])
def test_closed_form_examples(name, dims, bw):
    assert catalog.entry(name, dims).bw == bw


def test_mixed_closed_forms():
    assert catalog.entry("mctp", (7, 4), ["cbt", "path"]).bw == 4 + 1
    assert catalog.entry("mcxr", (7, 3), ["xt", "ring"]).bw == 2 * (3 + 1)


@pytest.mark.parametrize("name,k,d,lo,hi", [
    ("bcube-a", 4, 2, F(16, 3), 8),
    ("bcube-a", 2, 1, F(1), 1),
    ("bcube-a", 3, 2, F(4), 4),
    ("bcube-b", 3, 2, F(8, 3), 4),
    ("bcube-b", 4, 2, F(8, 3), 5),
    ("bcube-b", 3, 1, F(2, 3), 1),
])
def test_bcube_intervals(name, k, d, lo, hi):
    assert catalog.entry(name, k=k, d=d).bw == Interval(lo, hi)


def test_bcube_interval_equals_general_bounds():
    for name in ("bcube-a", "bcube-b"):
        for k in range(2, 10):
            for d in range(1, 5):
                e = catalog.entry(name, k=k, d=d)
                assert e.bw.lo == lower_bound(e.spec).value
                if name == "bcube-b" and k % 2 == 0:
                    # the tabulated upper form is the full geometric sum, looser
                    # than CC * Psi(alpha) = k^(d-1) when alpha = 1
                    assert e.bw.hi == (k ** d - 1) // (k - 1) >= upper_bound(e.spec) == k ** (d - 1)
                else:
                    assert e.bw.hi == upper_bound(e.spec)


def test_hamming_has_no_closed_form():
    assert catalog.entry("hamming", (3, 3)).bw is None


def test_wrong_families():
    with pytest.raises(WrongFamilies):
        catalog.entry("torus", (4, 4), ["path", "path"])
    with pytest.raises(WrongFamilies):
        catalog.entry("bcube-a", (4, 3))
    with pytest.raises(WrongFamilies):
        catalog.entry("nope", (3,))
    with pytest.raises(WrongFamilies):
        catalog.closed_form_bw(catalog.CatalogEntry("array", ProductSpec.uniform("ring", [3])))


# --- oracle on a sample (the full sweep lives in the acceptance suite) -----


@pytest.mark.parametrize("name", catalog.EXACT_FAMILIES)
def test_closed_form_matches_oracle_small(name):
    for e in catalog.instances(name, 12):
        assert exact_bisection_width(cartesian_product(e.spec)).width == e.bw, catalog.describe(e)


@pytest.mark.parametrize("name", ["bcube-a", "bcube-b"])
def test_bcube_interval_contains_oracle(name):
    for e in catalog.instances(name, 12):
        assert exact_bisection_width(cartesian_product(e.spec)).width in e.bw, catalog.describe(e)


# --- bandwidth -------------------------------------------------------------


def test_bbw_exact():
    e = catalog.entry("torus", (4, 4))
    assert catalog.bisection_bandwidth(e, CapacityModel(link_T=F(5, 2))) == 2 * F(5, 2) * 8


def test_bbw_bcube():
    b = catalog.entry("bcube-b", k=3, d=1)
    assert catalog.bisection_bandwidth(b, CapacityModel(switch_s=2)) == (F(4, 3), F(2))
    a = catalog.entry("bcube-a", k=4, d=2)
    assert catalog.bisection_bandwidth(a, CapacityModel(link_T=1)) == (F(32, 3), F(16))


def test_bbw_missing_capacity():
    with pytest.raises(MissingCapacity):
        catalog.bisection_bandwidth(catalog.entry("torus", (3,)), CapacityModel(switch_s=1))
    with pytest.raises(MissingCapacity):
        catalog.bisection_bandwidth(catalog.entry("bcube-b", k=3, d=2), CapacityModel(link_T=1))


def test_hamming_bbw_falls_back_to_bounds():
    e = catalog.entry("hamming", (3, 3))
    lo, hi = catalog.bisection_bandwidth(e, CapacityModel(link_T=1))
    assert (lo, hi) == (2 * lower_bound(e.spec).value, 2 * upper_bound(e.spec))


@given(st.fractions(min_value=0, max_value=100), st.integers(1, 20))
def test_bbw_scale_equivariance(t, c):
    for e in (catalog.entry("torus", (5, 4)), catalog.entry("bcube-a", k=3, d=2)):
        base = catalog.bisection_bandwidth(e, CapacityModel(link_T=t))
        scaled = catalog.bisection_bandwidth(e, CapacityModel(link_T=t * c))
        if isinstance(base, tuple):
            assert scaled == (base[0] * c, base[1] * c)
        else:
            assert scaled == base * c


def test_capacity_rejects_negative():
    with pytest.raises(ValueError):
        CapacityModel(link_T=-1)


@pytest.mark.parametrize("k,T,s,models", [
    (4, 1, 4, ("A",)),
    (4, 1, 2, ("B",)),
    (4, 1, 3, ()),
    (3, 1, 2, ("A", "B")),
    (6, 1, 1, ("B",)),
])
def test_model_rule(k, T, s, models):
    assert CapacityModel(T, s).bcube_models(k) == models


def test_model_rule_needs_both():
    assert CapacityModel(link_T=1).bcube_models(4) == ()


# --- enumeration -----------------------------------------------------------


def test_instance_counts():
    counts = {name: sum(1 for _ in catalog.instances(name, 24)) for name in catalog.ALL_FAMILIES}
    assert counts == {"array": 52, "torus": 52, "mct": 5, "mctp": 14, "mcx": 5, "mcxr": 14,
                      "hamming": 52, "bcube-a": 28, "bcube-b": 28}


def test_mixed_instances_have_both_kinds():
    for name, pair in (("mctp", {Kind.CBT, Kind.PATH}), ("mcxr", {Kind.XT, Kind.RING})):
        seen = set()
        for e in catalog.instances(name, 64):
            assert e.spec.kinds == pair
            key = tuple(f.label() for f in e.spec.factors)
            assert key not in seen
            seen.add(key)


def test_sorted_dims_small():
    assert sorted(catalog.sorted_dims(6)) == [(2,), (2, 2), (3,), (3, 2), (4,), (5,), (6,)]


def test_tree_sizes():
    assert catalog.tree_sizes(100) == [3, 7, 15, 31, 63]


# --- Table 1 ---------------------------------------------------------------


def bcube_rows():
    return [r for r in catalog.TABLE1 if r.family.startswith("bcube")]


@pytest.mark.parametrize("k", range(2, 10))
def test_table1_bcube_beta_and_cc_cells(k):
    for row in bcube_rows():
        if (k % 2 == 0) != (row.parity == "even"):
            continue
        f = factor("ssa" if row.family == "bcube-a" else "ssb", k)
        assert to_fraction(parse(row.beta).subs(k_, k)) == normalized_congestion(f)
        assert int(parse(row.cc).subs(k_, k)) == central_cut(f)


@pytest.mark.parametrize("k", range(2, 10))
@pytest.mark.parametrize("d", range(1, 4))
def test_table1_bcube_bandwidth_cells(k, d):
    for row in bcube_rows():
        if (k % 2 == 0) != (row.parity == "even"):
            continue
        lo_text, _, hi_text = row.bandwidth.partition(" ≤ BBW(")
        hi_text = hi_text.split(" ≤ ", 1)[1]
        sub = {k_: k, d_: d, T_: sympy.Rational(3, 2), s_: 5}
        cap = CapacityModel(link_T=F(3, 2), switch_s=5)
        want = catalog.bisection_bandwidth(catalog.entry(row.family, k=k, d=d), cap)
        assert (to_fraction(parse(lo_text).subs(sub)), to_fraction(parse(hi_text).subs(sub))) == want


def test_table1_exact_rows():
    probes = {
        "torus": [((4, 4), None), ((5, 3, 2), None)],
        "mcx": [((7, 3), None)],
        "mcxr": [((7, 4), ["xt", "ring"])],
        "mct": [((15, 7), None)],
        "mctp": [((7, 2), ["cbt", "path"])],
    }
    for row in catalog.TABLE1:
        if row.family not in probes:
            continue
        beta = F(row.beta)
        cc = int(row.cc)
        for dims, kinds in probes[row.family]:
            e = catalog.entry(row.family, dims, kinds)
            got = catalog.bisection_bandwidth(e, CapacityModel(link_T=1))
            assert to_fraction(parse(row.bandwidth).subs({T_: 1, psi_: psi(e.spec).psi})) == got
            for f in e.spec.factors:
                assert normalized_congestion(f) / f.r == beta
                assert central_cut(f) == cc


def test_table1_instance_column():
    rows = catalog.table1(4, 2, CapacityModel(link_T=1, switch_s=1))
    assert rows[0][-1] == "Value (k=4, d=2)"
    by_name = {(r[0], r[1]): r[-1] for r in rows[1:]}
    assert by_name[("Torus", "Ring")] == "16"
    assert by_name[("BCube", "Model A, even")] == "[32/3, 16]"
    assert by_name[("BCube", "Model A, odd")] == "-"
    assert by_name[("Mesh connected trees", "CBT")] == "-"


def test_table1_golden(tmp_path):
    from pathlib import Path

    golden = (Path(__file__).parent / "data" / "table1.md").read_text(encoding="utf-8")
    assert catalog.render_markdown(catalog.table1()) == golden


def test_renderers_agree_on_cells():
    rows = catalog.table1()
    csv_text = catalog.render_csv(rows)
    assert csv_text.splitlines()[0] == "Product graph,Factor graphs,β,CC,Bisection bandwidth"
    text = catalog.render_text(rows)
    for r in rows[1:]:
        assert r[4] in text


# --- reports ---------------------------------------------------------------


def test_report_dict_layout():
    d = catalog.report(catalog.entry("torus", (4, 4))).to_dict()
    assert list(d) == ["lower", "upper", "closed_form", "psi", "alpha", "topology", "dims", "factors"]
    assert d["lower"] == {"rational": "8", "ceil": 8, "mode": "strict"}
    assert (d["upper"], d["closed_form"], d["psi"], d["alpha"]) == (8, 8, 4, 1)


def test_report_bcube():
    d = catalog.report(catalog.entry("bcube-a", k=4, d=2), CapacityModel(link_T=1)).to_dict()
    assert d["lower"]["rational"] == "16/3" and d["lower"]["ceil"] == 6
    assert d["closed_form"] == ["16/3", "8"]
    assert d["bbw"] == ["32/3", "16"]
