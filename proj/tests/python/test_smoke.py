"""Smoke tests for the python module and the CLI binary.

The extension module is found via PYTHONPATH (set by ctest to the build
tree); the CLI path arrives in the DICUT_CLI environment variable.
"""

import json
import os
import subprocess
import sys

import pytest

import dicut_stream as ds


def test_graph_and_exact_dicut():
    g = ds.Graph(3, [(0, 1), (1, 2), (2, 0)])
    assert g.n == 3 and g.m == 3
    value, assignment = ds.exact_dicut(g)
    assert value == 1
    assert len(assignment) == 3

    star = ds.Graph(3, [(0, 1), (0, 2)])
    assert ds.exact_dicut(star)[0] == 2


def test_density_matrix_and_estimate():
    t = ds.BiasThresholds.ternary()
    g = ds.Graph(2, [(0, 1)])
    dm = ds.density_matrix(g, t)
    assert dm[2][0] == 1
    assert sum(sum(row) for row in dm) == 1

    scheme = ds.Scheme.default_scheme()
    est = ds.oblivious_estimate(g, scheme)
    assert est == pytest.approx(1.0)  # fully biased single edge

    value, _ = ds.exact_dicut(g)
    assert est <= value + 1e-9


def test_sandwich_on_random_graphs():
    scheme = ds.Scheme.default_scheme()
    for seed in range(30):
        g = ds.random_graph(8, 15, seed)
        est = ds.oblivious_estimate(g, scheme)
        val, _ = ds.exact_dicut(g)
        assert est <= val + 1e-9
        if val > 0:
            assert est / val >= 0.45


def test_streaming_algorithms():
    g = ds.random_graph(12, 60, 7)
    val, _ = ds.exact_dicut(g)
    out = ds.random_order_dicut(g, stream_seed=3, eps=0.1)
    assert 0.4 * val <= out["estimate"] <= val
    assert out["m"] == 60

    two = ds.two_pass_dicut(g, coin_seed=5, eps=0.1, order="sorted")
    assert 0.4 * val <= two["estimate"] <= val

    bg = ds.random_bounded_degree_graph(16, 25, 4, 11)
    bval, _ = ds.exact_dicut(bg)
    bd = ds.bounded_degree_dicut(bg, max_degree=4, hash_seed=2, eps=0.1)
    assert bd["estimate"] is not None
    assert 0.4 * bval <= bd["estimate"] <= bval


def test_determinism():
    g = ds.random_graph(20, 120, 9)
    a = ds.random_order_dicut(g, stream_seed=1, eps=0.1, k=30, m0=60)
    b = ds.random_order_dicut(g, stream_seed=1, eps=0.1, k=30, m0=60)
    assert a["estimate"] == b["estimate"]
    assert a["density"] == b["density"]


def test_kwise_hash():
    h = ds.KwiseHash.sample(1000, 256, 4, 42)
    assert h.field_degree == 10
    assert all(0 <= h(x) < 256 for x in range(100))
    with pytest.raises(Exception):
        ds.KwiseHash.sample(8, 6, 4, 1)


def test_csp_and_rmd():
    dicut = ds.Predicate.dicut()
    inst = ds.CspInstance(3, [dicut], [(0, [0, 1]), (0, [1, 2]), (0, [2, 0])])
    assert ds.val_at(inst, [0, 1, 0]) == (1, 3)
    assert ds.brute_force_val(inst) == (1, 3)

    assert ds.rho_min([dicut]) == pytest.approx(0.25, abs=1e-4)
    assert ds.rho_min([ds.Predicate.cut()]) == pytest.approx(0.5, abs=1e-4)

    point = [(0, 1), (1, 1), (0, 1), (0, 1)]  # mass on (0,1)
    dist = ds.ConstraintDistribution.satisfying(dicut, point)
    assert not dist.is_onewise()
    onewise = ds.ConstraintDistribution.uniform_onewise(ds.Predicate.cut())
    assert onewise.is_onewise()

    stream = ds.sample_rmd_stream([(dicut, dist, 1.0)], n=10, num_constraints=5,
                                  t_hybrid=5, seed=3)
    assert len(stream.symbols) == 5
    cleaned = ds.clean(stream)
    if cleaned.size > 0:
        assert ds.val_at(cleaned, stream.x_star) == (1, 1)
        assert ds.brute_force_val(cleaned) == (1, 1)


def test_hypergraph_ops():
    g = ds.Hypergraph(4, 2, [[0, 1], [1, 2]])
    assert ds.is_cycle_free(g)
    part = ds.cc_part(g, [0, 1, 2])
    assert part["valid"] and part["r_total"] == 2

    assert ds.count_s_vectors(ds.Hypergraph(2, 2, [[0, 1]]), 2, [1, 1]) == 1
    assert ds.estimate_h(6, 2, 2, 2, 1, 100, 1) == 0.0

    prob = ds.cycle_probability(100, 2, 0, 50, 1)
    assert prob["estimate"] == 0.0


def _cli():
    path = os.environ.get("DICUT_CLI")
    if not path or not os.path.exists(path):
        pytest.skip("DICUT_CLI not set")
    return path


def test_cli_gen_run_analyze(tmp_path):
    cli = _cli()
    graph_file = tmp_path / "g.txt"
    out = subprocess.run(
        [cli, "gen", "graph", "--n", "10", "--m", "20", "--seed", "1", "--out",
         str(graph_file)],
        capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    lines = graph_file.read_text().splitlines()
    assert lines[0] == "10 20"
    assert len(lines) == 21
    u, v = lines[1].split()
    assert 1 <= int(u) <= 10 and 1 <= int(v) <= 10

    records_file = tmp_path / "records.jsonl"
    out = subprocess.run(
        [cli, "run", "--algorithm", "random-order", "--input", str(graph_file),
         "--trials", "5", "--seed", "2", "--out", str(records_file)],
        capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    lines = records_file.read_text().splitlines()
    header = json.loads(lines[0])
    assert header["algorithm"] == "random-order"
    records = [json.loads(line) for line in lines[1:]]
    assert len(records) == 5
    for rec in records:
        assert rec["m"] == 20
        assert rec["exact"] is not None
        assert rec["estimate"] <= rec["exact"] + 1e-9
        # round-trip byte-identically
        assert json.dumps(rec, separators=(",", ":")) == json.dumps(
            json.loads(json.dumps(rec, separators=(",", ":"))), separators=(",", ":"))

    # identical config reproduces identical records except wall time
    rerun_file = tmp_path / "records2.jsonl"
    subprocess.run(
        [cli, "run", "--algorithm", "random-order", "--input", str(graph_file),
         "--trials", "5", "--seed", "2", "--out", str(rerun_file)],
        capture_output=True, text=True)
    first = [json.loads(line) for line in records_file.read_text().splitlines()[1:]]
    second = [json.loads(line) for line in rerun_file.read_text().splitlines()[1:]]
    for a, b in zip(first, second):
        a.pop("wall_ms"), b.pop("wall_ms")
        assert a == b

    summary = subprocess.run(
        [cli, "analyze", "--input", str(records_file)], capture_output=True, text=True)
    assert summary.returncode == 0, summary.stderr
    stats = json.loads(summary.stdout)
    assert stats["trials"] == 5
    assert stats["ratio_min"] >= 0.4


def test_cli_jobs_pool_is_deterministic(tmp_path):
    cli = _cli()
    graph_file = tmp_path / "g.txt"
    subprocess.run([cli, "gen", "graph", "--n", "12", "--m", "40", "--seed", "8", "--out",
                    str(graph_file)], capture_output=True, text=True)
    outs = []
    for jobs in ("1", "4"):
        run = subprocess.run(
            [cli, "run", "--algorithm", "two-pass", "--input", str(graph_file), "--trials",
             "8", "--seed", "5", "--jobs", jobs],
            capture_output=True, text=True)
        assert run.returncode == 0, run.stderr
        records = [json.loads(line) for line in run.stdout.splitlines()[1:]]
        for rec in records:
            rec.pop("wall_ms")
        outs.append(records)
    assert outs[0] == outs[1]


def test_cli_gen_empty_graph(tmp_path):
    cli = _cli()
    out_file = tmp_path / "empty.txt"
    run = subprocess.run([cli, "gen", "graph", "--n", "5", "--m", "0", "--out", str(out_file)],
                         capture_output=True, text=True)
    assert run.returncode == 0, run.stderr
    assert out_file.read_text() == "5 0\n"


def test_cli_empty_graph_and_exit_codes(tmp_path):
    cli = _cli()
    empty = tmp_path / "empty.txt"
    empty.write_text("3 0\n")
    out = subprocess.run(
        [cli, "run", "--algorithm", "random-order", "--input", str(empty)],
        capture_output=True, text=True)
    assert out.returncode == 0
    rec = json.loads(out.stdout.splitlines()[1])
    assert rec["estimate"] == 0.0

    bad = subprocess.run([cli, "run", "--algorithm", "no-such", "--input", str(empty)],
                         capture_output=True, text=True)
    assert bad.returncode == 2

    usage = subprocess.run([cli, "frobnicate"], capture_output=True, text=True)
    assert usage.returncode == 2


def test_cli_rmd_and_verify(tmp_path):
    cli = _cli()
    stream_file = tmp_path / "rmd.txt"
    out = subprocess.run(
        [cli, "gen", "rmd", "--mode", "yes", "--n", "8", "--alpha-n", "4", "--seed", "4",
         "--out", str(stream_file)],
        capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    record = json.loads(out.stdout)
    assert len(record["x_star"]) == 8
    lines = stream_file.read_text().splitlines()
    assert lines[0] == "2 2 8 4"
    assert len(lines) == 5

    verify = subprocess.run([cli, "verify", "--suite", "reservoir"], capture_output=True,
                            text=True)
    assert verify.returncode == 0, verify.stdout
    assert "[PASS] criterion-7" in verify.stdout

    # degree-violating graph completes with the violation flagged
    graph_file = tmp_path / "dense.txt"
    subprocess.run([cli, "gen", "graph", "--n", "6", "--m", "30", "--seed", "3", "--out",
                    str(graph_file)], capture_output=True, text=True)
    run = subprocess.run(
        [cli, "run", "--algorithm", "bounded-degree", "--input", str(graph_file),
         "--max-degree", "2", "--trials", "1"],
        capture_output=True, text=True)
    assert run.returncode == 0, run.stderr
    rec = json.loads(run.stdout.splitlines()[1])
    assert rec["degree_assumption_violated"] is True
