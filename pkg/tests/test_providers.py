import json

import pytest

from xlap.providers import (
    AlignmentMatrix,
    AuthError,
    EmbedAlignerClient,
    FixtureMissError,
    LiveDictionary,
    LiveTranslator,
    ProtocolError,
    ProviderBundle,
    ProviderUnavailableError,
    RateLimitError,
    ResponseCache,
    dedupe_case_insensitive,
    fixture_bundle,
    retry_call,
)


class TestFixtureProviders:
    def test_sentence_translation(self, bundle):
        text = "The soldiers were ordered to fire their weapons"
        assert bundle.translate_sentence(text, "european") == (
            "Os soldados receberam ordens para disparar as suas armas"
        )

    def test_sentence_miss_is_error(self, bundle):
        with pytest.raises(FixtureMissError):
            bundle.translate_sentence("Nothing like this in the table", "european")

    def test_repeated_call_served_from_cache(self, make_bundle):
        bundle = make_bundle()
        text = "The leaders met in Geneva"
        first = bundle.translate_sentence(text, "european")
        calls_after_first = bundle.translator.sentence_calls
        second = bundle.translate_sentence(text, "european")
        assert first == second
        assert bundle.translator.sentence_calls == calls_after_first
        assert bundle.cache.hits >= 1

    def test_term_translation_isolated(self, bundle):
        assert bundle.translate_term("fire", "european") == "incêndio"
        assert bundle.translate_term("We", "european") == "Nós"

    def test_term_identity_entry(self, bundle):
        assert bundle.translate_term("Marie Curie", "european") == "Marie Curie"

    def test_variant_is_a_parameter(self, bundle):
        assert bundle.translate_term("We", "brazilian") == "A gente"

    def test_alternatives_ordered(self, bundle):
        assert bundle.lookup_alternatives("fire") == [
            "incêndio", "fogo", "disparar", "despedir",
        ]

    def test_alternatives_unknown_term_empty(self, bundle):
        assert bundle.lookup_alternatives("zzqq") == []

    def test_alternatives_deduplicated_case_insensitively(self, bundle):
        assert bundle.lookup_alternatives("strike") == ["Greve", "paralisação"]

    def test_lemmatize_known_words(self, bundle):
        assert bundle.lemmatize(["receberam", "ordens"]) == ["receber", "ordem"]

    def test_lemmatize_empty_and_unknown(self, bundle):
        assert bundle.lemmatize([]) == []
        assert bundle.lemmatize(["Warsaw"]) == ["warsaw"]

    def test_synonyms_from_thesaurus(self, bundle):
        assert bundle.synonyms("disparar") == ["atirar", "alvejar"]

    def test_synonyms_unknown_empty(self, bundle):
        assert bundle.synonyms("inexistente") == []

    def test_synonyms_headword_filtered_out(self, bundle):
        assert bundle.synonyms("fogo") == ["incêndio", "lume"]

    def test_single_token_matrix(self, bundle):
        matrix = bundle.alignment_matrix(["hi"], ["olá"])
        assert matrix.probs == ((1.0,),)

    def test_diagonal_fixture_rows_sum_to_one(self, bundle):
        matrix = bundle.alignment_matrix(["a", "b", "c"], ["x", "y", "z"])
        for row in matrix.probs:
            assert sum(row) == pytest.approx(1.0, abs=1e-6)
            assert max(row) == row[matrix.probs.index(row)]

    def test_matrix_miss_is_error(self, bundle):
        with pytest.raises(FixtureMissError):
            bundle.alignment_matrix(["never"], ["seen"])


class TestAlignmentMatrixValidation:
    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ProtocolError, match="3 rows"):
            AlignmentMatrix.checked(["a", "b"], ["x"], [[1.0], [1.0], [1.0]])
        with pytest.raises(ProtocolError, match="columns"):
            AlignmentMatrix.checked(
                ["a", "b", "c"], ["x", "y", "z", "w", "v"],
                [[0.25, 0.25, 0.25, 0.25]] * 3,
            )

    def test_non_stochastic_row_rejected(self):
        with pytest.raises(ProtocolError, match="sums"):
            AlignmentMatrix.checked(["a"], ["x", "y"], [[0.7, 0.7]])

    def test_out_of_range_entry_rejected(self):
        with pytest.raises(ProtocolError, match="outside"):
            AlignmentMatrix.checked(["a"], ["x", "y"], [[1.2, -0.2]])

    def test_broken_fixture_table_rejected(self, tmp_path, providers_dir):
        import shutil

        broken = tmp_path / "providers"
        shutil.copytree(providers_dir, broken)
        (broken / "matrices.json").write_text(json.dumps([
            {"src_tokens": ["a", "b", "c"], "tgt_tokens": ["x", "y", "z", "w", "v"],
             "probs": [[0.25, 0.25, 0.25, 0.25]] * 3}
        ]))
        bundle = fixture_bundle(broken, tmp_path / "cache")
        with pytest.raises(ProtocolError):
            bundle.alignment_matrix(["a", "b", "c"], ["x", "y", "z", "w", "v"])


class TestRetry:
    def test_retryable_errors_retried_with_backoff(self):
        delays = []
        attempts = {"n": 0}

        def flaky():
            attempts["n"] += 1
            if attempts["n"] < 3:
                raise RateLimitError("slow down")
            return "ok"

        assert retry_call(flaky, attempts=3, base_delay=0.5, sleep=delays.append) == "ok"
        assert attempts["n"] == 3
        assert delays == [0.5, 1.0]

    def test_auth_errors_never_retried(self):
        attempts = {"n": 0}

        def rejected():
            attempts["n"] += 1
            raise AuthError("bad key")

        with pytest.raises(AuthError):
            retry_call(rejected, sleep=lambda _: None)
        assert attempts["n"] == 1

    def test_exhausted_retries_raise_last_error(self):
        def always_down():
            raise ProviderUnavailableError("down")

        with pytest.raises(ProviderUnavailableError):
            retry_call(always_down, attempts=2, sleep=lambda _: None)


class TestResponseCache:
    def test_round_trip_and_stats(self, tmp_path):
        cache = ResponseCache(tmp_path)
        assert cache.get("ns", "k") is None
        cache.put("ns", "k", {"v": "olá"})
        assert cache.get("ns", "k") == {"v": "olá"}
        assert cache.misses == 1 and cache.hits == 1

    def test_persists_across_instances(self, tmp_path):
        ResponseCache(tmp_path).put("ns", "k", {"v": 1})
        assert ResponseCache(tmp_path).get("ns", "k") == {"v": 1}

    def test_warm_cache_skips_provider(self, providers_dir, tmp_path):
        first = fixture_bundle(providers_dir, tmp_path / "shared")
        first.translate_term("fire", "european")
        second = fixture_bundle(providers_dir, tmp_path / "shared")
        assert second.translate_term("fire", "european") == "incêndio"
        assert second.translator.term_calls == 0


class FakeResponse:
    def __init__(self, status_code, body):
        self.status_code = status_code
        self._body = body

    def json(self):
        if self._body is None:
            raise ValueError("no body")
        return self._body


class FakeSession:
    def __init__(self, responses):
        self.responses = list(responses)
        self.requests = []

    def request(self, method, url, headers=None, json=None, timeout=None):
        self.requests.append({"method": method, "url": url, "json": json})
        return self.responses.pop(0)


class TestLiveClients:
    def test_translator_posts_and_parses(self):
        session = FakeSession([FakeResponse(200, {"translation": "Os soldados"})])
        client = LiveTranslator("https://mt.example", "key", session=session)
        assert client.translate_sentence("The soldiers", "european") == "Os soldados"
        sent = session.requests[0]
        assert sent["url"] == "https://mt.example/translate"
        assert sent["json"]["target"] == "pt-PT"

    def test_brazilian_variant_tag(self):
        session = FakeSession([FakeResponse(200, {"translation": "x"})])
        client = LiveTranslator("https://mt.example", "key", session=session)
        client.translate_term("fire", "brazilian")
        assert session.requests[0]["json"]["target"] == "pt-BR"

    def test_status_code_mapping(self):
        client = lambda resp: LiveTranslator(
            "https://mt.example", "key", session=FakeSession([resp])
        )
        with pytest.raises(AuthError):
            client(FakeResponse(401, {})).translate_term("x", "european")
        with pytest.raises(RateLimitError):
            client(FakeResponse(429, {})).translate_term("x", "european")
        with pytest.raises(ProviderUnavailableError):
            client(FakeResponse(503, {})).translate_term("x", "european")
        with pytest.raises(ProtocolError):
            client(FakeResponse(200, {"nope": 1})).translate_term("x", "european")

    def test_empty_key_rejected_up_front(self):
        with pytest.raises(AuthError):
            LiveTranslator("https://mt.example", "")

    def test_dictionary_parses_alternatives(self):
        session = FakeSession([FakeResponse(200, {"alternatives": ["a", "b"]})])
        client = LiveDictionary("https://dict.example", "key", session=session)
        assert client.alternatives("fire") == ["a", "b"]

    def test_aligner_client_dimension_check(self):
        session = FakeSession(
            [FakeResponse(200, {"probs": [[0.5, 0.5]] * 3, "model_id": "m"})]
        )
        client = EmbedAlignerClient("https://align.example", session=session)
        with pytest.raises(ProtocolError):
            client.matrix(["a", "b", "c"], ["x", "y", "z", "w", "v"])

    def test_aligner_client_happy_path(self):
        session = FakeSession(
            [FakeResponse(200, {"probs": [[1.0]], "model_id": "m"})]
        )
        client = EmbedAlignerClient("https://align.example", session=session)
        matrix = client.matrix(["hi"], ["olá"])
        assert matrix.probs == ((1.0,),)

    def test_live_bundle_replay_hits_network_once(self, tmp_path, providers_dir):
        from xlap.providers.fixtures import FileLemmatizer, FileThesaurus, FixtureAligner, FixtureDictionary

        def live_bundle(session):
            return ProviderBundle(
                translator=LiveTranslator("https://mt.example", "key", session=session),
                dictionary=FixtureDictionary(providers_dir / "alternatives.json"),
                lemmatizer=FileLemmatizer({"pt": providers_dir / "lemmas.pt.tsv"}),
                thesaurus=FileThesaurus({"pt": providers_dir / "thesaurus.pt.txt"}),
                aligner=FixtureAligner(providers_dir / "matrices.json"),
                cache=ResponseCache(tmp_path / "cache"),
            )

        session = FakeSession([FakeResponse(200, {"translation": "Olá"})])
        assert live_bundle(session).translate_sentence("Hello", "european") == "Olá"
        assert len(session.requests) == 1

        replay_session = FakeSession([])
        assert live_bundle(replay_session).translate_sentence("Hello", "european") == "Olá"
        assert replay_session.requests == []


class TestDedupe:
    def test_keeps_first_spelling(self):
        assert dedupe_case_insensitive(["Fogo", "fogo", "FOGO", "lume"]) == ["Fogo", "lume"]
