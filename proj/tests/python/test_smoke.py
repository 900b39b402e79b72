import math

import pytest

import localint


def test_generate_and_estimate():
    ds, truth = localint.gen_basic(4000, 400, seed=11)
    assert truth == 1.0
    assert len(ds) == 4000
    assert "i_ctx" in ds.signature_names

    rep = localint.estimate(ds, estimand="tace", x_cols=["x_1"], i_cols=["i_ctx"],
                            bins=20, trim=True)
    assert abs(rep["point"] - 1.0) < 0.3
    naive = localint.estimate(ds, estimand="naive")
    assert abs(naive["point"] - 1.0) > abs(rep["point"] - 1.0)


def test_csv_round_trip(tmp_path):
    ds, _ = localint.gen_basic(500, 50, seed=3)
    path = str(tmp_path / "data.csv")
    localint.save_dataset(ds, path)
    back = localint.load_dataset(path)
    assert len(back) == 500
    assert back.column("y") == ds.column("y")


def test_signatures_and_injection():
    ds, _ = localint.gen_basic(300, 30, seed=5)
    frac = localint.context_fraction(ds)
    assert all(0.0 <= v <= 1.0 for v in frac)
    adjusted = localint.context_fraction_t_adjusted(ds, c=0.1)
    assert all(a <= f + 1e-12 for a, f in zip(adjusted, frac))

    with_sig = ds.with_signature("i_new", frac)
    bumped = localint.inject_interference(with_sig, "i_new", "x_1", 2.0)
    expect = [y + 2.0 * f * x
              for y, f, x in zip(ds.column("y"), frac, ds.column("x_1"))]
    assert bumped.column("y") == pytest.approx(expect)


def test_dependence_summary_path_graph():
    g = localint.AdjacencyGraph(5, self_loops=True)
    for a, b in [(0, 1), (1, 2), (2, 3), (3, 4)]:
        g.add_edge(a, b)
    s = localint.dependence_summary(g)
    assert s["d_per_unit"] == [3, 4, 5, 4, 3]
    assert s["d_avg"] == pytest.approx(3.8)
    assert s["d_max"] == 5


def test_bootstrap_is_deterministic():
    ds, _ = localint.gen_basic(800, 80, seed=9)
    kwargs = dict(estimand="tace", x_cols=["x_1"], i_cols=["i_ctx"], bins=10,
                  trim=True, replicates=200, seed=42)
    a = localint.bootstrap(ds, **kwargs)
    b = localint.bootstrap(ds, **kwargs)
    assert a == b
    assert a["lo"] <= a["point"] <= a["hi"]


def test_toy_linear_identities():
    r1 = localint.toy_linear(1, alpha=2.0, beta=3.0)
    assert r1["recovered_alpha"] == 2.0
    assert r1["bias"] == 0.0
    r2 = localint.toy_linear(2, alpha=2.0, beta=3.0, delta=0.5)
    assert r2["bias"] == -0.5


def test_counterexample_tables_match():
    m1, m2, tace1, tace2 = localint.gen_counterexample_pair(200, 17, 2.0, 1.0, 0.5, 1.0)
    assert tace1 != tace2
    assert m1.column("y") == m2.column("y")
    assert m1.column("t") == m2.column("t")


def test_overlap_error_surfaces():
    ds, _ = localint.gen_t_dependent(2000, 200, seed=13)
    with pytest.raises(localint.OverlapError):
        localint.estimate(ds, estimand="tace", x_cols=["x_1"], i_cols=["i_ctx"],
                          bins=20, clip=0.0, trim=False)
