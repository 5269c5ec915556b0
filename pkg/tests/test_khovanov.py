from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from khdetect.diagram import count_cycles, cycle_partition, mirror, realize
from khdetect.errors import ResourceLimitExceeded
from khdetect.jones import jones_unreduced
from khdetect.khovanov import (
    DEFAULT_MAX_CROSSINGS,
    build_cube,
    chain_blocks,
    differential,
    equal_up_to_mirror,
    kh_polynomial,
    max_crossings,
    render_grid,
)
from khdetect.knotcodes import DTCode, parse_dt
from khdetect.polynomial import BigradedPoly, bp_eval_t_minus1, bp_mirror

from conftest import diagram, golden_kh, kh, knotinfo_rows, mini_census, stretch_enabled

CINQUEFOIL_KH = BigradedPoly({(-15, -5): 1, (-11, -4): 1, (-11, -3): 1, (-7, -2): 1, (-5, 0): 1, (-3, 0): 1})
UNKNOT_KH = BigradedPoly({(-1, 0): 1, (1, 0): 1})


def small_rank(rows, ncols):
    m = [[Fraction(x) for x in r] for r in rows]
    rk = 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        for i in range(rk + 1, len(m)):
            if m[i][c]:
                f = m[i][c] / m[rk][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rk])]
        rk += 1
    return rk


def naive_kh(D):
    """Dense Khovanov homology straight from the Frobenius algebra, for small diagrams."""
    n = D.n
    _, n_plus, n_minus = D.writhe()
    gens = {}
    for v in range(1 << n):
        circles = cycle_partition(D, v)
        h = bin(v).count("1")
        for labels in range(1 << len(circles)):
            xs = frozenset(c for j, c in enumerate(circles) if labels >> j & 1)
            q = len(circles) - 2 * len(xs) + h + n_plus - 2 * n_minus
            gens.setdefault((h, q), []).append((v, frozenset(circles), xs))
    index = {key: {(v, xs): i for i, (v, _, xs) in enumerate(g)} for key, g in gens.items()}

    def image(v, circles, xs, i):
        w = v | 1 << i
        new = frozenset(cycle_partition(D, w))
        gone, born = circles - new, new - circles
        kept = xs - gone
        if len(gone) == 2:
            (m,) = born
            nx = len(gone & xs)
            return w, ({kept | {m}: 1} if nx == 1 else {kept: 1} if nx == 0 else {})
        (old,) = gone
        b, c = sorted(born, key=min)
        if old in xs:
            return w, {kept | {b, c}: 1}
        return w, {kept | {b}: 1, kept | {c}: 1}

    ranks = {}
    for (h, q), g in gens.items():
        target = index.get((h + 1, q), {})
        rows = []
        for v, circles, xs in g:
            row = [0] * len(target)
            for i in range(n):
                if v >> i & 1:
                    continue
                sign = -1 if bin(v & ((1 << i) - 1)).count("1") % 2 else 1
                w, im = image(v, circles, xs, i)
                for ys, c in im.items():
                    row[target[(w, ys)]] += sign * c
            rows.append(row)
        ranks[(h, q)] = small_rank(rows, len(target)) if target else 0
    out = {}
    for (h, q), g in gens.items():
        dim = len(g) - ranks[(h, q)] - ranks.get((h - 1, q), 0)
        if dim:
            out[(q, h - n_minus)] = dim
    return BigradedPoly(out)


def knotinfo_diagram(row):
    return realize(DTCode(tuple(int(x) for x in row[1].split(","))))


# cube ----------------------------------------------------------------------


def test_cube_of_unknot():
    cube = build_cube(realize(DTCode(())))
    assert len(cube.vertices) == 1 and cube.edges == ()


def test_cube_of_kink():
    cube = build_cube(realize(DTCode((2,))))
    assert len(cube.vertices) == 2
    (edge,) = cube.edges
    counts = [len(v.circles) for v in cube.vertices]
    assert sorted(counts) == [1, 2]
    assert edge.kind == ("merge" if counts[0] == 2 else "split")
    assert edge.sign == 1


@pytest.mark.parametrize("code", ["bca", "4 6 8 2", "dciaFHjEbg"])
def test_cube_structure(code):
    D = diagram(code)
    cube = build_cube(D)
    n = D.n
    assert len(cube.vertices) == 1 << n
    assert len(cube.edges) == n * (1 << (n - 1))
    for vert in cube.vertices:
        assert len(vert.circles) == count_cycles(D, vert.state)
        assert list(vert.circles) == cycle_partition(D, vert.state)
    for e in cube.edges:
        assert e.target == e.source | 1 << e.crossing and e.source != e.target
        a, b = len(cube.vertices[e.source].circles), len(cube.vertices[e.target].circles)
        if e.kind == "merge":
            assert b == a - 1 and len(e.circles) == 2 and len(e.result) == 1
        else:
            assert e.kind == "split" and b == a + 1 and len(e.circles) == 1 and len(e.result) == 2
        below = bin(e.source & ((1 << e.crossing) - 1)).count("1")
        assert e.sign == (-1) ** below


def test_cube_squares_anticommute():
    D = diagram("4 8 10 2 6")
    signs = {(e.source, e.crossing): e.sign for e in build_cube(D).edges}
    for v in range(1 << D.n):
        for i in range(D.n):
            for j in range(i + 1, D.n):
                if v >> i & 1 or v >> j & 1:
                    continue
                s = signs[(v, i)] * signs[(v | 1 << i, j)] * signs[(v, j)] * signs[(v | 1 << j, i)]
                assert s == -1


# chain complex -------------------------------------------------------------


@pytest.mark.parametrize("code", ["bca", "4 6 8 2"])
def test_chain_block_gradings(code):
    D = diagram(code)
    _, n_plus, n_minus = D.writhe()
    total = 0
    for block in chain_blocks(D):
        for v, mask in block.basis:
            c = count_cycles(D, v)
            w = bin(v).count("1")
            assert block.r == w - n_minus
            assert block.q == c - 2 * bin(mask).count("1") + w + n_plus - 2 * n_minus
            assert 0 <= mask < 1 << c
        total += len(block.basis)
    assert total == sum(1 << count_cycles(D, v) for v in range(1 << D.n))


def compose_is_zero(D):
    blocks = {(b.r, b.q): b for b in chain_blocks(D)}
    r_values = sorted({r for r, _ in blocks})
    checked = 0
    for r in r_values:
        d1, d2 = differential(D, r), differential(D, r + 1)
        for q, rows in d1.items():
            nxt = d2.get(q)
            assert len(rows) == len(blocks[(r, q)].basis)
            if nxt is None:
                continue
            for row in rows:
                acc = {}
                for col, c in row.items():
                    for col2, c2 in nxt[col].items():
                        acc[col2] = acc.get(col2, 0) + c * c2
                assert not any(acc.values())
                checked += 1
    return checked


DD_CODES = [r.dt.compressed() for r in mini_census() if r.crossings <= 10]
DD_CODES += ["bca", "4 6 8 2", "4 8 10 2 6", "4 8 12 10 2 6", "4 10 14 12 2 8 6"]


@pytest.mark.parametrize("code", DD_CODES)
def test_d_squared_is_zero(code):
    assert compose_is_zero(diagram(code)) > 0


def test_differential_outside_range_is_empty():
    D = diagram("bca")
    _, _, n_minus = D.writhe()
    assert differential(D, -n_minus - 1) == {}
    assert differential(D, D.n - n_minus) == {}


# homology ------------------------------------------------------------------


def test_unknot():
    assert kh_polynomial(realize(DTCode(()))) == UNKNOT_KH
    assert kh_polynomial(realize(DTCode((2,)))) == UNKNOT_KH
    assert kh_polynomial(realize(DTCode((4, 2)))) == UNKNOT_KH


def test_trefoil():
    t = kh("bca")
    assert equal_up_to_mirror(t, BigradedPoly({(1, 0): 1, (3, 0): 1, (5, 2): 1, (9, 3): 1}))


def test_cinquefoil_matches_grid():
    assert equal_up_to_mirror(kh("6 8 10 2 4"), CINQUEFOIL_KH)


def test_equal_up_to_mirror_examples():
    assert equal_up_to_mirror(UNKNOT_KH, UNKNOT_KH)
    assert equal_up_to_mirror(CINQUEFOIL_KH, bp_mirror(CINQUEFOIL_KH))
    assert not equal_up_to_mirror(CINQUEFOIL_KH, kh("dciaFHjEbg"))


SMALL_ROWS = [r for r in knotinfo_rows() if len(r[1].split(",")) <= 7]


@pytest.mark.parametrize("row", SMALL_ROWS, ids=lambda r: r[0])
def test_against_dense_construction(row):
    D = knotinfo_diagram(row)
    assert kh_polynomial(D) == naive_kh(D)


@pytest.mark.slow
@pytest.mark.parametrize("row", knotinfo_rows(), ids=lambda r: r[0])
def test_against_knot_tables(row):
    D = knotinfo_diagram(row)
    rational = kh_polynomial(D)
    mod2 = kh_polynomial(D, "gf2")
    expected_q = BigradedPoly.from_canonical(row[3])
    expected_2 = BigradedPoly.from_canonical(row[4])
    if rational == expected_q:
        assert mod2 == expected_2
    else:
        assert rational == bp_mirror(expected_q)
        assert mod2 == bp_mirror(expected_2)


GOLDEN_DEFAULT = sorted(n for n, (c, _) in golden_kh().items() if len(parse_dt(c)) <= 12)
GOLDEN_LARGE = sorted(n for n, (c, _) in golden_kh().items() if len(parse_dt(c)) > 12)


@pytest.mark.parametrize("name", GOLDEN_DEFAULT)
def test_golden_grids(name):
    code, table = golden_kh()[name]
    assert equal_up_to_mirror(kh(code), table)


@pytest.mark.slow
@pytest.mark.parametrize("name", GOLDEN_LARGE)
def test_golden_grids_large(name):
    code, table = golden_kh()[name]
    n = len(parse_dt(code))
    if n > DEFAULT_MAX_CROSSINGS and not stretch_enabled():
        pytest.skip(f"{n} crossings is beyond the default Khovanov budget")
    assert equal_up_to_mirror(kh(code, limit=max(n, DEFAULT_MAX_CROSSINGS)), table)


PROPERTY_CODES = ["bca", "4 6 8 2", "6 8 10 2 4", "4 8 10 2 6", "4 8 12 10 2 6", "4 10 14 12 2 8 6", "dciaFHjEbg"]


@pytest.mark.parametrize("code", PROPERTY_CODES)
def test_euler_characteristic(code):
    assert bp_eval_t_minus1(kh(code)) == jones_unreduced(diagram(code))
    assert all(c > 0 for c in kh(code).terms.values())


@pytest.mark.parametrize("code", PROPERTY_CODES)
def test_mirror(code):
    assert kh_polynomial(mirror(diagram(code))) == bp_mirror(kh(code))


@settings(max_examples=15)
@given(st.sampled_from(PROPERTY_CODES[:6]), st.randoms())
def test_crossing_order_does_not_matter(code, rnd):
    D = diagram(code)
    order = list(range(D.n))
    rnd.shuffle(order)
    assert kh_polynomial(D.permuted(order)) == kh(code)


@pytest.mark.parametrize("code", PROPERTY_CODES)
def test_gf2_dominates_rationals(code):
    q, f2 = kh(code), kh(code, "gf2")
    for key, dim in q.terms.items():
        assert f2.terms.get(key, 0) >= dim
    assert bp_eval_t_minus1(f2) == bp_eval_t_minus1(q)


def test_gf2_sees_torsion_of_trefoil():
    assert kh("bca", "gf2") != kh("bca")
    assert sum(kh("bca", "gf2").terms.values()) == 6


def test_field_names():
    D = diagram("bca")
    assert kh_polynomial(D, "q") == kh_polynomial(D, "rationals")
    assert kh_polynomial(D, "f2") == kh_polynomial(D, "gf2")
    with pytest.raises(ValueError):
        kh_polynomial(D, "z")


def test_parallel_blocks():
    D = diagram("dciaFHjEbg")
    assert kh_polynomial(D, workers=2) == kh("dciaFHjEbg")


# budget --------------------------------------------------------------------


def test_resource_limit_argument():
    D = diagram("fJGkHlICEABd")
    with pytest.raises(ResourceLimitExceeded) as info:
        kh_polynomial(D, limit=10)
    assert info.value.progress["crossings"] == 12
    assert info.value.progress["limit"] == 10


def test_resource_limit_environment(monkeypatch):
    D = diagram("4 8 10 2 6")
    monkeypatch.setenv("KNOT_MAX_CROSSINGS", "4")
    assert max_crossings() == 4
    with pytest.raises(ResourceLimitExceeded):
        kh_polynomial(D)
    monkeypatch.setenv("KNOT_MAX_CROSSINGS", "lots")
    with pytest.raises(ResourceLimitExceeded):
        kh_polynomial(D)
    monkeypatch.delenv("KNOT_MAX_CROSSINGS")
    assert max_crossings() == DEFAULT_MAX_CROSSINGS
    assert kh_polynomial(D) == kh("4 8 10 2 6")


def test_default_budget_rejects_large_census_knots():
    big = next(r for r in mini_census() if r.crossings > DEFAULT_MAX_CROSSINGS)
    with pytest.raises(ResourceLimitExceeded):
        kh_polynomial(realize(big.dt))


# rendering -----------------------------------------------------------------


def test_render_grid():
    text = render_grid(BigradedPoly({(1, 0): 1, (3, 0): 1, (5, 2): 1, (9, 3): 1}))
    lines = text.splitlines()
    assert lines[0] == "q\\t\t0\t1\t2\t3\tchi"
    assert lines[1] == "1\t1\t.\t.\t.\t1"
    assert lines[3] == "5\t.\t.\t1\t.\t1"
    assert lines[4] == "7\t.\t.\t.\t.\t0"
    assert lines[5] == "9\t.\t.\t.\t1\t-1"
    assert len(lines) == 6


def test_render_grid_chi_column_is_jones():
    table = kh("dciaFHjEbg")
    chi = {}
    for line in render_grid(table).splitlines()[1:]:
        cells = line.split("\t")
        if cells[-1] != "0":
            chi[int(cells[0])] = int(cells[-1])
    assert chi == jones_unreduced(diagram("dciaFHjEbg")).terms


def test_render_empty():
    assert render_grid(BigradedPoly()).startswith("q\\t")
