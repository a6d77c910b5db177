#!/usr/bin/env python3
"""Regenerates the bundled synthetic fixtures.

Everything here is deterministic: two small embedding tables and three
keyword-separable corpora. Each corpus row's label is decided by which cue
word the sentence contains, so a working model must reach high scores. The
two larger corpora share the same cue vocabulary on purpose: one serves as
the data-rich helper when the other is starved down to a handful of rows.
"""

import csv
import random

CUES = {
    "g1": ["great", "lovely", "superb", "awesome", "delightful", "cheerful",
           "bright", "winning", "happy", "glad", "sweet", "fine"],
    "g2": ["awful", "dreadful", "gloomy", "broken", "sour", "failing",
           "sad", "angry", "rotten", "harsh", "bleak", "grim"],
    "g3": ["table", "window", "paper", "street", "morning", "report",
           "update", "note", "usual", "regular", "standard", "ordinary"],
}

TONE_TEMPLATES = [
    "it was very {cue} today",
    "this felt quite {cue} again",
    "the thing seemed {cue} still",
    "that looked rather {cue} now",
    "it is just so {cue}",
    "really {cue} all day today",
    "the time felt {cue} mostly",
    "it stayed {cue} again today",
]

MOOD_TEMPLATES = [
    "the news turned {cue} today",
    "mood was {cue} all day",
    "it seemed {cue} this time",
    "things looked {cue} again",
    "the day stayed {cue} mostly",
    "quite {cue} and rather {cue2}",
    "still {cue} after the morning call",
    "everything felt {cue} around here",
]

MINI_TEMPLATES = [
    "such a {cue} day",
    "it felt {cue} here",
    "quite {cue} all morning",
    "a very {cue} time",
]

EMOJI = ["\U0001F600", "\U0001F62D", "\U0001F44D", "☀️", "\U0001F327"]


def decorate(rng, text):
    r = rng.random()
    if r < 0.12:
        tail = "".join(rng.choice("abcdefgh") for _ in range(5))
        return text + " http://t.co/" + tail
    if r < 0.22:
        return text + " !!!"
    if r < 0.30:
        return text + " " + rng.choice(EMOJI)
    if r < 0.40:
        return text + "..."
    if r < 0.48:
        return text.replace(" ", "  ", 1)
    return text


def make_corpus(path, prefix, labels, counts, templates, rng):
    rows = []
    for (label, group), count in zip(labels, counts):
        cues = CUES[group]
        for k in range(count):
            cue = cues[k % len(cues)]
            cue2 = cues[(k + 5) % len(cues)]
            text = rng.choice(templates).format(cue=cue, cue2=cue2)
            rows.append([f"{prefix}{len(rows) + 1:04d}", decorate(rng, text), label])
    rng.shuffle(rows)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["id", "text", "label"])
        writer.writerows(rows)
    return rows


def template_words(templates):
    words = set()
    for t in templates:
        for w in t.replace("{cue2}", "").replace("{cue}", "").split():
            words.add(w)
    return words


def write_table(path, vocab, dim, seed):
    rng = random.Random(seed)
    with open(path, "w", encoding="utf-8") as f:
        for token in vocab:
            vals = " ".join(f"{rng.gauss(0, 0.5):.4f}" for _ in range(dim))
            f.write(f"{token} {vals}\n")


def write_clustered_table(path, vocab, dim, seed):
    # Cue vectors sit near a per-group center, the way words of one flavor
    # cluster in a real pretrained table. A model can then generalize to a
    # held-out cue word instead of memorizing each one. Non-cue words stay
    # near the origin.
    rng = random.Random(seed)
    centers = {}
    for i, group in enumerate(sorted(CUES)):
        c = [0.0] * dim
        for d in range(4 * i, 4 * i + 4):
            c[d] = 1.3
        centers[group] = c
    group_of = {w: g for g, words in CUES.items() for w in words}
    origin = [0.0] * dim
    with open(path, "w", encoding="utf-8") as f:
        for token in vocab:
            base = centers.get(group_of.get(token), origin)
            vals = " ".join(f"{base[d] + rng.gauss(0, 0.5):.4f}" for d in range(dim))
            f.write(f"{token} {vals}\n")


def main():
    rng = random.Random(20240915)

    make_corpus(
        "task_tone.csv", "t",
        [("upbeat", "g1"), ("downbeat", "g2"), ("neutral", "g3")],
        [100, 60, 40], TONE_TEMPLATES, rng)
    make_corpus(
        "task_mood.csv", "m",
        [("up", "g1"), ("down", "g2"), ("flat", "g3")],
        [134, 133, 133], MOOD_TEMPLATES, rng)
    make_corpus(
        "task_mini.csv", "x",
        [("warm", "g1"), ("cold", "g2")],
        [15, 15], MINI_TEMPLATES, rng)

    vocab = set()
    for group in CUES.values():
        vocab.update(group)
    for templates in (TONE_TEMPLATES, MOOD_TEMPLATES, MINI_TEMPLATES):
        vocab.update(template_words(templates))
    vocab.update([",", ".", "!", "?"])
    write_clustered_table("toy_embeddings_d16.txt", sorted(vocab), 16, 16)

    common = ["the", "of", "and", "a", "to", "in", "is", "you", "that", "it",
              "he", "was", "for", "on", "are", "as", "with", "his", "they",
              "i", "at", "be", "this", "have", "from", "or", "one", "had",
              "by", "word", "but", "not", "what", "all", "were", "we", "when",
              "your", "can", "said", "there", "use", "an", "each", "which",
              "she", "do", "how", "their", "if"]
    assert len(common) == 50
    write_table("fixture_embeddings_d8.txt", common, 8, 8)


if __name__ == "__main__":
    main()
