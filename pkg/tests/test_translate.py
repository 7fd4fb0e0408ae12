import pytest
from hypothesis import given
from hypothesis import strategies as st

from sfpipe.translate import load_table, make_table, save_table, translate_tokens

from .oracles import topk_translations


def write_tsv(path, rows):
    path.write_text("".join(f"{s}\t{t}\t{p}\n" for s, t, p in rows), encoding="utf-8")


class TestLoadTable:
    def test_sorted_by_prob(self, tmp_path):
        path = tmp_path / "t.tsv"
        write_tsv(path, [("mai", "water", 0.3), ("mai", "river", 0.5), ("mai", "sea", 0.2)])
        table = load_table(path)
        assert table.candidates("mai") == (("river", 0.5), ("water", 0.3), ("sea", 0.2))

    def test_prob_out_of_range(self, tmp_path):
        path = tmp_path / "t.tsv"
        write_tsv(path, [("mai", "water", 1.5)])
        with pytest.raises(ValueError, match="line 1"):
            load_table(path)

    def test_tie_broken_lexicographically(self, tmp_path):
        path = tmp_path / "t.tsv"
        write_tsv(path, [("mai", "zebra", 0.3), ("mai", "apple", 0.3)])
        table = load_table(path)
        assert [t for t, _ in table.candidates("mai")] == ["apple", "zebra"]

    def test_roundtrip(self, tmp_path):
        table = make_table(
            [("a", "x", 0.25), ("a", "y", 0.5), ("b", "z", 1.0), ("a", "w", 0.25)]
        )
        save_table(table, tmp_path / "t.tsv")
        assert load_table(tmp_path / "t.tsv") == table


class TestTranslateTokens:
    def setup_method(self):
        self.table = make_table(
            [("k5", f"t{i}", p) for i, p in enumerate([0.3, 0.25, 0.2, 0.15, 0.1])]
            + [("k2", "u0", 0.6), ("k2", "u1", 0.4)]
        )

    def test_top_four_of_five(self):
        assert translate_tokens(["k5"], self.table, k=4) == ["t0", "t1", "t2", "t3"]

    def test_fewer_candidates_than_k(self):
        assert translate_tokens(["k2"], self.table, k=4) == ["u0", "u1"]

    def test_oov_modes(self):
        assert translate_tokens(["zzz", "k2"], self.table, k=1, oov="drop") == ["u0"]
        assert translate_tokens(["zzz", "k2"], self.table, k=1, oov="passthrough") == [
            "zzz",
            "u0",
        ]

    def test_k_must_be_positive(self):
        with pytest.raises(ValueError):
            translate_tokens(["k2"], self.table, k=0)

    def test_output_follows_input_order(self):
        out = translate_tokens(["k2", "k5", "k2"], self.table, k=1)
        assert out == ["u0", "t0", "u0"]


@st.composite
def random_table_pairs(draw):
    sources = draw(st.lists(st.sampled_from(["s1", "s2", "s3"]), min_size=1, max_size=8))
    pairs = []
    for i, s in enumerate(sources):
        target = draw(st.sampled_from(["a", "b", "c", "d", "e"]))
        prob = draw(st.floats(0, 1, allow_nan=False))
        pairs.append((s, f"{target}{i % 3}", prob))
    return pairs


class TestAgainstBruteForce:
    @given(pairs=random_table_pairs(), k=st.integers(1, 6))
    def test_per_token_matches_sort_oracle(self, pairs, k):
        table = make_table(pairs)
        for source in {p[0] for p in pairs}:
            got = translate_tokens([source], table, k=k)
            raw = [(t, p) for s, t, p in pairs if s == source]
            # the table deduplicates nothing, so the oracle sees the same list
            assert got == topk_translations(raw, k)

    @given(
        tokens=st.lists(st.sampled_from(["s1", "s2", "oov1", "oov2"]), max_size=12),
        k=st.integers(1, 5),
    )
    def test_output_length_invariant(self, tokens, k):
        table = make_table(
            [("s1", "x", 0.5), ("s1", "y", 0.4), ("s1", "z", 0.1), ("s2", "q", 1.0)]
        )
        n_cands = {"s1": 3, "s2": 1}
        for oov in ("drop", "passthrough"):
            out = translate_tokens(tokens, table, k=k, oov=oov)
            expected = sum(
                min(k, n_cands[t]) if t in n_cands else (1 if oov == "passthrough" else 0)
                for t in tokens
            )
            assert len(out) == expected

    def test_unbounded_k_concatenates_full_lists(self):
        table = make_table([("s1", "x", 0.5), ("s1", "y", 0.4), ("s2", "q", 1.0)])
        assert translate_tokens(["s1", "s2"], table, k=10**9) == ["x", "y", "q"]
