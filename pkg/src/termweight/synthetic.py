"""Seeded synthetic two-class corpora with planted class-specific terms.

Each document has ``doc_len`` token slots. A slot holds one of the
``n_specific`` terms of the document's own class with probability
``p_specific`` and one of ``n_noise`` shared noise terms otherwise; both
draws are uniform.
"""
import numpy as np

from .corpus import Corpus, Document, Label


def generate_corpus(n_per_class, doc_len=50, n_noise=2000, n_specific=50,
                    p_specific=0.3, seed=0):
    rng = np.random.default_rng(seed)
    noise = np.array([f"w{i:05d}" for i in range(n_noise)])
    specific = {
        Label.POSITIVE: np.array([f"pos{i:03d}" for i in range(n_specific)]),
        Label.NEGATIVE: np.array([f"neg{i:03d}" for i in range(n_specific)]),
    }
    docs = []
    for i in range(2 * n_per_class):
        label = Label.POSITIVE if i % 2 == 0 else Label.NEGATIVE
        planted = rng.random(doc_len) < p_specific
        tokens = np.where(planted,
                          specific[label][rng.integers(0, n_specific, doc_len)],
                          noise[rng.integers(0, n_noise, doc_len)])
        docs.append(Document(f"syn-{i}", label, " ".join(tokens.tolist())))
    return Corpus(tuple(docs))


def write_tsv(corpus, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for doc in corpus:
            tag = "pos" if doc.label is Label.POSITIVE else "neg"
            fh.write(f"{tag}\t{doc.text}\n")
