#!/usr/bin/env python3
"""Regenerate the fixture corpus, provider tables and gold alignments.

The corpus is engineered so every alignment strategy fires at least twice
under the default configuration; expected_methods.json records the intended
attribution per annotation. Character spans are computed here, never typed
by hand. Run from the repository root:

    python scripts/build_fixtures.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from xlap.corpus import tokenize  # noqa: E402

FIXTURES = ROOT / "fixtures"

# ---------------------------------------------------------------------------
# Sentences: (doc, sent, split, source, translation, annotations)
# annotation: (id, kind, label, surface, expected_method)
# ---------------------------------------------------------------------------

SENTENCES = [
    ("d01", "s1", "train",
     "Marie Curie was born in Warsaw on November 7, 1867.",
     "Marie Curie nasceu em Varsóvia a 7 de novembro de 1867.",
     [
         ("t1", "trigger", "Life:Be-Born", "born", "Lemma"),
         ("a1", "argument", "Person", "Marie Curie", "SMatch"),
         ("a2", "argument", "Place", "Warsaw", "SMatch"),
         ("a3", "argument", "Time-Within", "November 7, 1867", "SMatch"),
     ]),
    ("d01", "s2", "train",
     "The soldiers were ordered to fire their weapons",
     "Os soldados receberam ordens para disparar as suas armas",
     [
         ("t1", "trigger", "Conflict:Attack", "fire", "MTrans"),
         ("a1", "argument", "Attacker", "The soldiers", "SMatch"),
         ("a2", "argument", "Instrument", "their weapons", "MTrans"),
     ]),
    ("d02", "s1", "train",
     "The troops received orders to withdraw",
     "As tropas receberam ordens para se retirarem",
     [
         ("t1", "trigger", "Movement:Transport", "received orders", "Lemma"),
         ("t2", "trigger", "Movement:Transport", "withdraw", "Lemma"),
         ("a1", "argument", "Artifact", "The troops", "SMatch"),
     ]),
    ("d02", "s2", "train",
     "The leaders met in Geneva",
     "Os líderes reuniram-se em Genebra",
     [
         ("t1", "trigger", "Contact:Meet", "met", "MTrans"),
         ("a1", "argument", "Place", "Geneva", "SMatch"),
     ]),
    ("d03", "s1", "train",
     "The police shot the suspect",
     "A polícia alvejou o suspeito",
     [
         ("t1", "trigger", "Conflict:Attack", "shot", "Synonym"),
     ]),
    ("d04", "s1", "dev",
     "Police arrested the mayor on Tuesday",
     "A polícia deteve o autarca na terça-feira",
     [
         ("t1", "trigger", "Justice:Arrest-Jail", "arrested", "Lemma"),
     ]),
    ("d04", "s2", "dev",
     "Warplanes struck the depot overnight",
     "Os aviões de guerra bombardearam o depósito durante a noite",
     [
         ("t1", "trigger", "Conflict:Attack", "struck", "MTrans"),
         ("a1", "argument", "Target", "the depot", "SMatch"),
         ("a2", "argument", "Time-Within", "overnight", "WAligner"),
     ]),
    ("d05", "s1", "dev",
     "Soldiers began to shoot at the crowd",
     "Os soldados começaram a atirar contra a multidão",
     [
         ("t1", "trigger", "Conflict:Attack", "shoot", "Synonym"),
     ]),
    ("d05", "s2", "dev",
     "Officials quietly shelved the proposal",
     "As autoridades engavetaram discretamente a proposta",
     [
         ("t1", "trigger", "Business:End-Org", "quietly shelved", "WAligner"),
     ]),
    ("d06", "s1", "test",
     "We have been under heavy fire in the Middle East",
     "Temos estado debaixo de fogo intenso no Médio Oriente",
     [
         ("t1", "trigger", "Conflict:Attack", "fire", "MTrans"),
         ("a1", "argument", "Target", "We", "Unaligned"),
         ("a2", "argument", "Place", "the Middle East", "Fuzzy"),
     ]),
    ("d06", "s2", "test",
     "The talks broke down last week",
     "As conversações fracassaram na semana passada",
     [
         ("t1", "trigger", "Business:End-Org", "broke down", "WAligner"),
         ("a1", "argument", "Entity", "The talks", "SMatch"),
     ]),
    ("d07", "s1", "test",
     "You will be judged.",
     "Vós sereis julgados.",
     [
         ("t1", "trigger", "Justice:Trial-Hearing", "judged", "Lemma"),
         ("a1", "argument", "Defendant", "You", "Unaligned"),
     ]),
    ("d07", "s2", "test",
     "The blast killed three people",
     "A explosão matou três pessoas",
     [
         ("t1", "trigger", "Life:Die", "killed", "Synonym"),
         ("a1", "argument", "Victim", "three people", "SMatch"),
     ]),
    ("d07", "s3", "test",
     "Negotiators gathered at the White House",
     "Os negociadores reuniram-se na Casa Branca",
     [
         ("a1", "argument", "Place", "the White House", "Fuzzy"),
         ("a2", "argument", "Entity", "Negotiators", "SMatch"),
     ]),
]

# Gold manual alignments for the test split: (doc, sent, ann, gold_surface).
# d06/s1/a1 ("We") has no gold record: the translation drops the subject.
GOLD = [
    ("d06", "s1", "t1", "fogo"),
    ("d06", "s1", "a2", "o Médio Oriente"),
    ("d06", "s2", "t1", "fracassaram"),
    ("d06", "s2", "a1", "As conversações"),
    ("d07", "s1", "a1", "Vós"),
    ("d07", "s1", "t1", "julgados"),
    ("d07", "s2", "t1", "matou"),
    ("d07", "s2", "a1", "três pessoas"),
    ("d07", "s3", "a1", "a Casa Branca"),
    ("d07", "s3", "a2", "Os negociadores"),
]

# Order-search fixture: the word aligner must run before the fuzzy pass (and
# before the plain string match, which latches onto the decoy "a cidade do
# Porto") to align "the port city" exactly.
SEARCH_SENTENCES = [
    ("ds01", "s1", "test",
     "The envoy arrived in the port city after leaving the city of Porto",
     "O enviado chegou à cidade portuária depois de deixar a cidade do Porto",
     [
         ("a1", "argument", "Destination", "the port city", "WAligner"),
     ]),
    ("ds01", "s2", "test",
     "The president spoke in Lisbon",
     "O presidente falou em Lisboa",
     [
         ("a1", "argument", "Place", "Lisbon", "SMatch"),
     ]),
]

SEARCH_GOLD = [
    ("ds01", "s1", "a1", "à cidade portuária"),
    ("ds01", "s2", "a1", "Lisboa"),
]

TERM_TRANSLATIONS = {
    "born": "nascido",
    "Marie Curie": "Marie Curie",
    "Warsaw": "Varsóvia",
    "November 7, 1867": "7 de novembro de 1867",
    "fire": "incêndio",
    "The soldiers": "Os soldados",
    "their weapons": "as armas deles",
    "We": "Nós",
    "the Middle East": "o Médio Oriente",
    "The troops": "As tropas",
    "received orders": "recebeu ordens",
    "withdraw": "retirar",
    "arrested": "detido",
    "met": "conheceu",
    "Geneva": "Genebra",
    "struck": "atingido",
    "the depot": "o depósito",
    "overnight": "da noite para o dia",
    "broke down": "avariou",
    "The talks": "As conversações",
    "You": "você",
    "judged": "julgado",
    "shot": "disparou",
    "shoot": "alvejar",
    "killed": "assassinou",
    "three people": "três pessoas",
    "quietly shelved": "discretamente arquivado",
    "the White House": "a Casa Branca",
    "Negotiators": "Os negociadores",
    "the port city": "a cidade do porto",
    "Lisbon": "Lisboa",
}

ALTERNATIVES = {
    "fire": ["incêndio", "fogo", "disparar", "despedir"],
    "their weapons": ["as suas armas", "suas armas"],
    "met": ["encontrou", "reuniu-se", "conheceu"],
    "struck": ["golpeado", "bombardeou", "atingiu"],
    "shot": ["tiro", "disparo"],
    "shoot": ["balear"],
    "killed": ["abatido", "assassinado"],
    "You": ["tu", "vocês"],
    "broke down": ["avariado", "quebrou"],
    # exercises case-insensitive deduplication; unused by the corpus
    "strike": ["Greve", "greve", "paralisação"],
}

LEMMAS = {
    "nascido": "nascer", "nasceu": "nascer",
    "receberam": "receber", "recebeu": "receber",
    "ordens": "ordem",
    "retirarem": "retirar",
    "detido": "deter", "deteve": "deter",
    "julgado": "julgar", "julgados": "julgar",
    "sereis": "ser", "fomos": "ser",
    "temos": "ter", "estado": "estar",
    "alvejou": "alvejar", "alvejado": "alvejar",
    "reuniram-se": "reunir", "reuniu-se": "reunir",
    "bombardearam": "bombardear", "bombardeou": "bombardear",
    "avariou": "avariar", "avariado": "avariar",
    "quebrou": "quebrar",
    "conheceu": "conhecer", "encontrou": "encontrar",
    "disparou": "disparar",
    "suas": "seu", "armas": "arma",
    "tropas": "tropa", "soldados": "soldado",
    "líderes": "líder", "conversações": "conversação",
    "autoridades": "autoridade", "pessoas": "pessoa",
    "negociadores": "negociador",
    "atingido": "atingir", "atingiu": "atingir",
    "golpeado": "golpear",
    "abatido": "abater",
    "assassinado": "assassinar", "assassinou": "assassinar",
    "matou": "matar", "executou": "executar",
    "começaram": "começar",
    "engavetaram": "engavetar", "arquivado": "arquivar",
    "atirou": "atirar", "atiraram": "atirar",
    "vocês": "você",
}

THESAURUS = {
    "disparou": ["atirar", "alvejar"],
    "disparar": ["atirar", "alvejar"],
    "alvejar": ["atirar", "disparar"],
    "assassinou": ["matou", "executou"],
    # headword listed among its own synonyms on purpose (filter test)
    "fogo": ["fogo", "incêndio", "lume"],
}

# Matrix recipes: tuples of (source sentence, translation, {row: [strong cols]}).
# Rows not listed get a diagonal-style single strong column.
MATRIX_SPECS = [
    ("Warplanes struck the depot overnight",
     "Os aviões de guerra bombardearam o depósito durante a noite",
     {0: [1], 1: [4], 2: [5], 3: [6], 4: [7, 8, 9]}),
    ("The talks broke down last week",
     "As conversações fracassaram na semana passada",
     {0: [0], 1: [1], 2: [2], 3: [2], 4: [5], 5: [4]}),
    ("Officials quietly shelved the proposal",
     "As autoridades engavetaram discretamente a proposta",
     {0: [1], 1: [3], 2: [2], 3: [4], 4: [5]}),
    ("The envoy arrived in the port city after leaving the city of Porto",
     "O enviado chegou à cidade portuária depois de deixar a cidade do Porto",
     {0: [0], 1: [1], 2: [2], 3: [3], 4: [3], 5: [5], 6: [4],
      7: [6], 8: [8], 9: [9], 10: [10], 11: [11], 12: [12]}),
]

LOW_PROB = 0.01


def build_matrix(n_src: int, n_tgt: int, strong: dict[int, list[int]]) -> list[list[float]]:
    rows = []
    for i in range(n_src):
        columns = strong.get(i, [min(i, n_tgt - 1)])
        high = (1.0 - LOW_PROB * (n_tgt - len(columns))) / len(columns)
        assert high > 0.1, f"strong weight {high} would fall under the selection threshold"
        row = [LOW_PROB] * n_tgt
        for j in columns:
            row[j] = high
        assert abs(sum(row) - 1.0) < 1e-9
        rows.append(row)
    return rows


def annotation_record(text: str, ann_id: str, kind: str, label: str, surface: str) -> dict:
    start = text.find(surface)
    assert start != -1, f"surface {surface!r} not in {text!r}"
    assert text.find(surface, start + 1) == -1, f"surface {surface!r} ambiguous in {text!r}"
    return {
        "id": ann_id,
        "kind": kind,
        "label": label,
        "start": start,
        "end": start + len(surface),
        "surface": surface,
    }


def write_corpus(path: Path, sentences, with_translation: bool = False) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for doc, sent, split, text, translation, annotations in sentences:
            record = {
                "doc_id": doc,
                "sent_id": sent,
                "split": split,
                "text": text,
                "annotations": [
                    annotation_record(text, ann_id, kind, label, surface)
                    for ann_id, kind, label, surface, _ in annotations
                ],
                "translation": translation if with_translation else None,
            }
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")


def write_gold(path: Path, gold, sentences) -> None:
    translations = {(doc, sent): trans for doc, sent, _, _, trans, _ in (
        (d, s, sp, t, tr, a) for d, s, sp, t, tr, a in sentences
    )}
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for doc, sent, ann_id, surface in gold:
            translation = translations[(doc, sent)]
            start = translation.find(surface)
            assert start != -1, f"gold {surface!r} not in {translation!r}"
            handle.write(json.dumps({
                "doc_id": doc,
                "sent_id": sent,
                "annotation_id": ann_id,
                "gold_start": start,
                "gold_end": start + len(surface),
                "gold_surface": surface,
            }, ensure_ascii=False) + "\n")


def main() -> None:
    providers = FIXTURES / "providers"
    search = FIXTURES / "search"
    providers.mkdir(parents=True, exist_ok=True)
    search.mkdir(parents=True, exist_ok=True)

    write_corpus(FIXTURES / "corpus.jsonl", SENTENCES)
    write_gold(FIXTURES / "gold.jsonl", GOLD, SENTENCES)
    write_corpus(search / "corpus.jsonl", SEARCH_SENTENCES)
    write_gold(search / "gold.jsonl", SEARCH_GOLD, SEARCH_SENTENCES)

    expected = {}
    methods = []
    for doc, sent, _, _, _, annotations in SENTENCES:
        for ann_id, _, _, _, method in annotations:
            expected[f"{doc}/{sent}/{ann_id}"] = method
            methods.append(method)
    assert len(methods) == 30, f"corpus must hold 30 annotations, found {len(methods)}"
    for method in ("SMatch", "Lemma", "MTrans", "Synonym", "WAligner", "Fuzzy", "Unaligned"):
        assert methods.count(method) >= 2, f"{method} fires fewer than twice"
    with open(FIXTURES / "expected_methods.json", "w", encoding="utf-8") as handle:
        json.dump(expected, handle, ensure_ascii=False, indent=2, sort_keys=True)
        handle.write("\n")

    sentence_table = {src: tgt for _, _, _, src, tgt, _ in SENTENCES + SEARCH_SENTENCES}
    translations = {
        "sentences": {
            "european": sentence_table,
            "brazilian": {
                "Marie Curie was born in Warsaw on November 7, 1867.":
                    "Marie Curie nasceu em Varsóvia em 7 de novembro de 1867.",
            },
        },
        "terms": {
            "european": TERM_TRANSLATIONS,
            "brazilian": {"We": "A gente", "Warsaw": "Varsóvia"},
        },
    }
    with open(providers / "translations.json", "w", encoding="utf-8") as handle:
        json.dump(translations, handle, ensure_ascii=False, indent=2, sort_keys=True)
        handle.write("\n")

    with open(providers / "alternatives.json", "w", encoding="utf-8") as handle:
        json.dump(ALTERNATIVES, handle, ensure_ascii=False, indent=2, sort_keys=True)
        handle.write("\n")

    with open(providers / "lemmas.pt.tsv", "w", encoding="utf-8", newline="\n") as handle:
        for surface in sorted(LEMMAS):
            handle.write(f"{surface}\t{LEMMAS[surface]}\n")

    with open(providers / "thesaurus.pt.txt", "w", encoding="utf-8", newline="\n") as handle:
        for head in sorted(THESAURUS):
            handle.write(f"{head}: {', '.join(THESAURUS[head])}\n")

    matrices = [
        {"src_tokens": ["hi"], "tgt_tokens": ["olá"], "probs": [[1.0]]},
        {"src_tokens": ["a", "b", "c"], "tgt_tokens": ["x", "y", "z"],
         "probs": [[0.8, 0.1, 0.1], [0.1, 0.8, 0.1], [0.1, 0.1, 0.8]]},
    ]
    for src_text, tgt_text, strong in MATRIX_SPECS:
        src_tokens = tokenize(src_text).surfaces()
        tgt_tokens = tokenize(tgt_text).surfaces()
        matrices.append({
            "src_tokens": src_tokens,
            "tgt_tokens": tgt_tokens,
            "probs": build_matrix(len(src_tokens), len(tgt_tokens), strong),
        })
    with open(providers / "matrices.json", "w", encoding="utf-8") as handle:
        json.dump(matrices, handle, ensure_ascii=False, indent=1)
        handle.write("\n")

    print(f"fixtures written under {FIXTURES}")


if __name__ == "__main__":
    main()
