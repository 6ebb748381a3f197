import pytest
from hypothesis import given, strategies as st

from otkit import lm
from otkit.romanizer import (
    Affix,
    Candidate,
    DEFAULT_AFFIXES,
    ExceptionLexicon,
    GenLimits,
    Lexicon,
    NoVowelInStem,
    OTWord,
    apply_harmony,
    check_vowel_harmony,
    generate_candidates,
    invert_candidate,
    romanize,
    strip_affixes,
)
from otkit.scheme import UnknownLetter

WIDE = GenLimits(beam_width=5000, max_candidates=5000)


@pytest.fixture
def lexicon():
    return Lexicon(
        stems=frozenset({"gel", "ol", "üç", "amele"}),
        full_forms=frozenset({"hoca"}),
    )


class TestOTWord:
    def test_from_text(self, table):
        word = OTWord.from_text("عمله", table)
        assert word.letters == ("ع", "م", "ل", "ه")
        assert word.text == "عمله"

    def test_unknown_letter(self, table):
        with pytest.raises(UnknownLetter):
            OTWord.from_text("xyz", table)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            OTWord(())


class TestGenerateCandidates:
    def test_paper_readings_of_amele(self, table):
        surfaces = generate_candidates(OTWord.from_text("عمله", table), table, WIDE).surfaces()
        assert "imle" in surfaces
        assert "amele" in surfaces

    def test_archaic_oldi(self, table):
        word = OTWord.from_text("الدى", table)
        result = generate_candidates(word, table, GenLimits(max_insertions=0))
        assert "oldi" in result.surfaces()

    def test_single_letter_insertion_enumeration(self, table):
        word = OTWord.from_text("ب", table)
        result = generate_candidates(word, table, GenLimits(max_insertions=1))
        # brute-force oracle: bare consonant plus one final vowel each
        expected = {"b"} | {"b" + v for v in "aeıioöuü"}
        assert set(result.surfaces()) == expected

    def test_character_accuracy_trace(self, table):
        word = OTWord.from_text("عمله", table)
        for cand in generate_candidates(word, table, WIDE).candidates:
            assert invert_candidate(cand) == word.text

    def test_monophonic_no_insertions_is_singleton(self, table):
        word = OTWord.from_text("برد", table)  # b, r, d: one alternative each
        result = generate_candidates(word, table, GenLimits(max_insertions=0))
        assert result.surfaces() == ["brd"]
        assert not result.truncated

    def test_truncation_recorded_not_raised(self, table):
        word = OTWord.from_text("عمله", table)
        result = generate_candidates(word, table, GenLimits(beam_width=4, max_candidates=4))
        assert result.truncated
        assert len(result.candidates) == 4

    def test_deterministic(self, table):
        word = OTWord.from_text("عمله", table)
        first = generate_candidates(word, table).surfaces()
        second = generate_candidates(word, table).surfaces()
        assert first == second

    def test_insertion_penalty_in_score(self, table):
        word = OTWord.from_text("ب", table)
        result = generate_candidates(word, table, GenLimits(max_insertions=1))
        by_surface = {c.surface: c for c in result.candidates}
        assert by_surface["ba"].gen_score == pytest.approx(0.5 * by_surface["b"].gen_score)


class TestStripAffixes:
    def test_two_affixes(self, lexicon):
        assert strip_affixes("geldiler", lexicon) == {("gel", ("-DI", "-lAr"))}

    def test_bare_stem(self, lexicon):
        assert strip_affixes("gel", lexicon) == {("gel", ())}

    def test_unmatchable(self, lexicon):
        assert strip_affixes("xyzzy", lexicon) == set()

    def test_full_form_lookup(self, lexicon):
        assert ("hoca", ()) in strip_affixes("hoca", lexicon)


class TestApplyHarmony:
    @pytest.mark.parametrize(
        "stem,chain,expected",
        [
            ("ol", ["-DI"], "oldu"),
            ("gel", ["-DI"], "geldi"),
            ("üç", ["-(I)ncI"], "üçüncü"),
            ("iki", ["-(I)ncI"], "ikinci"),
            ("ev", ["-lAr", "-DA"], "evlerde"),
            ("kitap", ["-DA"], "kitapta"),
        ],
    )
    def test_harmony(self, stem, chain, expected):
        assert apply_harmony(stem, chain) == expected

    def test_affix_objects_accepted(self):
        assert apply_harmony("gel", [Affix("-DI", "DI")]) == "geldi"

    def test_no_vowel_in_stem(self):
        with pytest.raises(NoVowelInStem):
            apply_harmony("krk", ["-DI"])

    @given(
        st.sampled_from(["ol", "gel", "üç", "kapı", "göz", "su", "ev", "kitap"]),
        st.lists(st.sampled_from([a.name for a in DEFAULT_AFFIXES]), min_size=1, max_size=3),
    )
    def test_suffix_vowels_satisfy_harmony(self, stem, chain):
        word = apply_harmony(stem, chain)
        suffix = word[len(stem):]
        last_stem_vowel = next(ch for ch in reversed(stem) if ch in "aeıioöuü")
        assert check_vowel_harmony(last_stem_vowel + suffix)


class TestCheckVowelHarmony:
    @pytest.mark.parametrize(
        "word,expected",
        [
            ("oldu", True),
            ("oldi", False),  # archaic, harmony-violating
            ("üçünci", False),
            ("üçüncü", True),
            ("geldi", True),
            ("a", True),
            ("brk", True),  # vacuous: no vowels
        ],
    )
    def test_verdicts(self, word, expected):
        assert check_vowel_harmony(word) is expected


class TestRomanize:
    def test_exception_short_circuits(self, table, lexicon):
        exceptions = ExceptionLexicon({"خواجه": "hoca", "کوکرجین": "güvercin"})
        result = romanize(OTWord.from_text("خواجه", table), table, lexicon, exceptions)
        assert [c.surface for c in result] == ["hoca"]
        result = romanize(OTWord.from_text("کوکرجین", table), table, lexicon, exceptions)
        assert [c.surface for c in result] == ["güvercin"]

    def test_lm_prefers_in_domain_reading(self, table, lexicon):
        model = lm.train(["amele geldi", "amele oldu"], order=1)
        ranked = romanize(
            OTWord.from_text("عمله", table),
            table,
            lexicon,
            ExceptionLexicon(),
            lm_model=model,
            limits=WIDE,
        )
        surfaces = [c.surface for c in ranked]
        assert surfaces[0] == "amele"
        assert "imle" not in surfaces or surfaces.index("imle") > 0

    def test_unfiltered_fallback_when_lexicon_misses(self, table):
        empty = Lexicon(frozenset())
        ranked = romanize(
            OTWord.from_text("برد", table), table, empty, ExceptionLexicon(),
            limits=GenLimits(max_insertions=0),
        )
        assert [c.surface for c in ranked] == ["brd"]

    def test_deterministic(self, table, lexicon):
        word = OTWord.from_text("عمله", table)
        model = lm.train(["amele"], order=1)
        a = romanize(word, table, lexicon, ExceptionLexicon(), model, WIDE)
        b = romanize(word, table, lexicon, ExceptionLexicon(), model, WIDE)
        assert [(c.surface, c.total) for c in a] == [(c.surface, c.total) for c in b]

    def test_ranked_totals_descending(self, table, lexicon):
        model = lm.train(["amele geldi"], order=1)
        ranked = romanize(
            OTWord.from_text("عمله", table), table, Lexicon(frozenset()),
            ExceptionLexicon(), model,
        )
        totals = [c.total for c in ranked]
        assert totals == sorted(totals, reverse=True)


class TestLexiconIO:
    def test_round_trip_files(self, tmp_path):
        lex_file = tmp_path / "lex.txt"
        lex_file.write_text("gel\nhoca\tfull\n# comment\n", "utf-8")
        lex = Lexicon.from_file(lex_file)
        assert "gel" in lex.stems
        assert "hoca" in lex.full_forms

        exc_file = tmp_path / "exc.tsv"
        exc_file.write_text("خواجه\thoca\n", "utf-8")
        exc = ExceptionLexicon.from_file(exc_file)
        assert exc.entries == {"خواجه": "hoca"}

    def test_unknown_tag_rejected(self, tmp_path):
        lex_file = tmp_path / "lex.txt"
        lex_file.write_text("hoca\tbogus\n", "utf-8")
        with pytest.raises(ValueError):
            Lexicon.from_file(lex_file)
