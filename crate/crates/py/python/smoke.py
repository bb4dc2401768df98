"""Smoke test for the vlgap extension. Run: python smoke.py"""

import vlgap

TEXT = "ATCGGCTCCAGACCAGTACCCGTTCCGTGGT"


def main():
    p = vlgap.Pattern("A.{6,7}CC.{2,6}GT")
    assert (p.k, p.m) == (3, 5)
    assert p.stats() == {"m": 5, "k": 3, "A": 8, "B": 13}
    assert p.subpatterns == [b"A", b"CC", b"GT"]
    assert p.gaps == [(6, 7), (2, 6)]
    assert str(vlgap.Pattern(str(p))) == str(p)

    assert vlgap.find_endpoints(p, TEXT) == [17, 28, 31]
    assert vlgap.find_endpoints("A.{6,7}CC.{2,6}GT", TEXT.encode()) == [17, 28, 31]
    stats = vlgap.match_stats(p, TEXT)
    assert stats["alpha"] == 14 and stats["layer_occurrences"] == [5, 5, 4]

    q = vlgap.Pattern("G.{0,3}C.{1,6}A.{2,7}T")
    fly = vlgap.report_combinations(q, TEXT)
    chunked = vlgap.report_combinations(q, TEXT, engine="chunked", chunk_len=q.max_span)
    assert sorted(fly) == sorted(chunked) == vlgap.oracle_combinations(q, TEXT)
    at17 = sorted(c for c in fly if c[0] == 5 and c[3] == 17)
    assert at17 == [[5, 6, 10, 17], [5, 6, 12, 17], [5, 8, 10, 17], [5, 8, 12, 17], [5, 9, 12, 17]]

    g = vlgap.build_graph(q, TEXT)
    assert g.count_combinations() == vlgap.count_combinations(q, TEXT) == len(fly)
    assert sorted(g.combinations()) == sorted(fly)
    assert all(len([e for e in g.edges() if e[:2] == (l, n)]) <= 2 for l in range(2, g.k + 1) for n in g.nodes(l))
    assert vlgap.build_graph("A.{0,0}B", "AB").to_text() == "N 1 1\nN 2 2\nE 2 2 1 1\n"

    u = vlgap.Pattern.from_parts([b"A", b"B"], [(2, None)])
    assert not u.is_bounded and u.max_span is None
    assert vlgap.find_endpoints(u, "ABxBxxBxxxxxxxxxB") == [4, 7, 17]
    for bad in (lambda: vlgap.Pattern("A.{3,1}B"),
                lambda: vlgap.report_combinations(u, "AB"),
                lambda: vlgap.report_combinations(q, TEXT, engine="nope"),
                lambda: vlgap.report_combinations(q, TEXT, engine="chunked", chunk_len=3)):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")
    print("vlgap smoke test passed")


if __name__ == "__main__":
    main()
