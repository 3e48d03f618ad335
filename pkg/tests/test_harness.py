import math
import random

from globalcert import (
    BenchSpec,
    Bits,
    Certificate,
    IdAssignment,
    IdRangePolicy,
    SchemeParams,
    SchemeTag,
    bench_sizes,
    clique,
    cycle,
    default_bench_specs,
    prove_and_run,
    random_h_colorable_graph,
    random_id_assignment,
    rows_to_csv,
    run_all_nodes,
)
from globalcert.harness import CSV_HEADER
from globalcert.schemes import HashCertificate, decode_hash_payload, encode_certificate

K2 = clique(2)


def fixed_params(m):
    return SchemeParams(target=K2, id_policy=IdRangePolicy.fixed(m))


class TestRunAllNodes:
    def test_honest_hash_on_c6(self):
        g = cycle(6)
        ids = random_id_assignment(6, 64, 4)
        params = fixed_params(64)
        cert, result = prove_and_run(g, ids, SchemeTag.HASH, params)
        assert result.all_accept
        assert result.all_accept == all(result.decisions)
        assert result.size_bits == cert.payload.length
        assert result.prover_probes >= 1

    def test_corrupted_entry_rejected_at_edge(self):
        g = cycle(6)
        ids = random_id_assignment(6, 64, 4)
        params = fixed_params(64)
        cert, _ = prove_and_run(g, ids, SchemeTag.HASH, params)
        decoded = decode_hash_payload(cert.payload, params)
        from globalcert import eval_hash

        hit = eval_hash(decoded.hash_index, ids.id_of(0), len(decoded.colors))
        colors = list(decoded.colors)
        colors[hit] ^= 1
        bad = encode_certificate(
            HashCertificate(decoded.claimed_n, decoded.hash_index, tuple(colors)),
            params,
        )
        result = run_all_nodes(g, ids, bad, params)
        assert not result.all_accept
        assert not (result.decisions[0] and all(result.decisions[v] for v in (1, 5)))

    def test_random_payload_fuzz_on_triangle(self):
        rng = random.Random(31)
        tri = clique(3)
        ids = IdAssignment((0, 1, 2), 8)
        params = fixed_params(8)
        for _ in range(300):
            bits = Bits.from01(
                "".join(rng.choice("01") for _ in range(rng.randrange(0, 80)))
            )
            for scheme in SchemeTag:
                result = run_all_nodes(tri, ids, Certificate(scheme, bits), params)
                assert not result.all_accept


class TestProbeStatistics:
    def test_probes_follow_the_expected_search_cost(self):
        # candidate indices probed stay under 20 * e^k / sqrt(2 pi k) in at
        # least 99% of seeded runs
        for k in (4, 6, 8):
            bound = 20 * math.exp(k) / math.sqrt(2 * math.pi * k)
            policy = IdRangePolicy.poly(4)
            params = SchemeParams(target=K2, id_policy=policy)
            over = 0
            runs = 100
            for seed in range(runs):
                g = random_h_colorable_graph(k, K2, 0.5, seed)
                ids = random_id_assignment(k, policy.evaluate(k), seed + 1000)
                _, result = prove_and_run(g, ids, SchemeTag.HASH, params)
                if result.prover_probes >= bound:
                    over += 1
            assert over <= runs // 100


class TestBench:
    def test_reference_sizes(self):
        specs = [BenchSpec(12, K2, IdRangePolicy.poly(4))]
        rows = bench_sizes(specs, list(SchemeTag), seed=0)
        by_scheme = {row.scheme: row for row in rows}
        assert by_scheme["hash"].size_bits == 44
        assert by_scheme["idlist"].size_bits == 199
        assert by_scheme["bitmap"].size_bits == 20736
        assert all(row.status == "ok" for row in rows)
        assert by_scheme["idlist"].prover_probes == 0

    def test_loglog_regime(self):
        specs = [
            BenchSpec(8, K2, IdRangePolicy.fixed(1 << 64)),
            BenchSpec(8, K2, IdRangePolicy.fixed(1 << 128)),
        ]
        rows = bench_sizes(specs, [SchemeTag.HASH, SchemeTag.IDLIST], seed=1)
        hash_rows = [r for r in rows if r.scheme == "hash"]
        list_rows = [r for r in rows if r.scheme == "idlist"]
        assert hash_rows[1].size_bits - hash_rows[0].size_bits == 1
        assert list_rows[1].size_bits - list_rows[0].size_bits == 512

    def test_single_vertex_row(self):
        lonely = clique(1)
        specs = [BenchSpec(1, lonely, IdRangePolicy.fixed(2), density=0.0)]
        rows = bench_sizes(specs, [SchemeTag.HASH], seed=0)
        # gamma(1) + 2-bit index into the size-3 family + zero-width entry
        assert rows[0].size_bits == 3
        assert rows[0].status == "ok"

    def test_prover_error_becomes_status(self):
        specs = [BenchSpec(8, K2, IdRangePolicy.doubly_exponential())]
        rows = bench_sizes(specs, [SchemeTag.BITMAP], seed=0)
        assert rows[0].status == "BitmapTooLarge"
        assert rows[0].size_bits is None

    def test_monotone_separation(self):
        specs = [BenchSpec(n, K2, IdRangePolicy.poly(4)) for n in (4, 6, 8, 10, 12)]
        rows = bench_sizes(specs, list(SchemeTag), seed=3)
        for n in (4, 6, 8, 10, 12):
            sizes = {r.scheme: r.size_bits for r in rows if r.n == n}
            assert sizes["hash"] < sizes["idlist"] < sizes["bitmap"]

    def test_csv_shape_and_determinism(self):
        specs = default_bench_specs()[:3]
        a = rows_to_csv(bench_sizes(specs, [SchemeTag.HASH, SchemeTag.IDLIST], seed=9))
        b = rows_to_csv(bench_sizes(specs, [SchemeTag.HASH, SchemeTag.IDLIST], seed=9))
        lines_a, lines_b = a.strip().splitlines(), b.strip().splitlines()
        assert lines_a[0] == CSV_HEADER
        assert len(lines_a) == 1 + 2 * len(specs)
        # identical modulo the machine-dependent wall-clock column
        strip = lambda line: line.rsplit(",", 1)[0]
        assert [strip(l) for l in lines_a] == [strip(l) for l in lines_b]
