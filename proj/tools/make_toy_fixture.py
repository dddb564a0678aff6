#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Writes the toy fixture under tests/data/toy. Output is a pure function of SEED."""

import argparse
import json
import math
import random
from pathlib import Path

SEED = 20240917
TEXT_DIM = 12
CROSS_DIM = 8

# (topic words, claim text, gold label, supporting facts, image captions)
TOPICS = [
    ("bridge", "The Harbor Bridge reopened to traffic in March.", "supported",
     ["The Harbor Bridge reopened to traffic in March after repairs.",
      "City engineers signed off on the bridge inspection in late February."],
     ["cars crossing the harbor bridge", "ribbon cutting at the bridge"]),
    ("vaccine", "The new flu vaccine was approved for children under two.", "refuted",
     ["Regulators approved the flu vaccine only for adults over eighteen.",
      "Trials in young children have not started yet."],
     ["vials of flu vaccine"]),
    ("election", "Turnout in the county election passed 70 percent.", "nei",
     ["The county election was held on a rainy Tuesday.",
      "Officials have not released final turnout figures."],
     []),
    ("river", "The Green River flooded the old mill district.", "supported",
     ["Water from the Green River covered streets in the old mill district.",
      "Residents of the mill district were evacuated overnight."],
     ["flooded street near the mill", "sandbags along the river"]),
    ("stadium", "The stadium roof collapsed during the concert.", "refuted",
     ["The concert at the stadium ended without incident.",
      "A video of a roof collapse was filmed at a different venue in 2015."],
     ["crowd at the stadium concert"]),
    ("tax", "The state cut the sales tax on groceries to zero.", "supported",
     ["Lawmakers voted to remove the sales tax on groceries entirely.",
      "The grocery tax repeal takes effect in July."],
     []),
    ("wolf", "Wolves were reintroduced to the national park last year.", "nei",
     ["A proposal to bring wolves back to the park is under review.",
      "Park rangers held a public meeting about wildlife."],
     ["a gray wolf in snow"]),
    ("satellite", "The weather satellite launched on schedule.", "refuted",
     ["The weather satellite launch was postponed by two weeks.",
      "Engineers found a fault in the rocket's second stage."],
     ["rocket on the launch pad", "satellite in a clean room"]),
    ("library", "The central library extended its weekend hours.", "supported",
     ["The central library now stays open until 9 p.m. on Saturdays and Sundays.",
      "Library staff said the longer weekend hours start this month."],
     ["library reading room"]),
    ("mayor", "The mayor resigned after the budget vote.", "nei",
     ["The budget vote passed by a narrow margin.",
      "The mayor declined to comment on rumors about her future."],
     ["mayor at a podium"]),
]

FILLER = [
    "Local shops reported steady business this week.",
    "A spokesperson said more details would follow.",
    "The weather stayed mild through the weekend.",
    "Several residents attended the evening meeting.",
    "Traffic on the main road was lighter than usual.",
    "The announcement drew mixed reactions online.",
]


def unit(v):
    n = math.sqrt(sum(x * x for x in v))
    return [x / n for x in v]


def noisy(rng, base, scale):
    return unit([b + rng.gauss(0.0, scale) for b in base])


def rnd(v):
    return [round(x, 6) for x in v]


def build(rng):
    docs, claims = [], []
    text_emb, cross_emb = [], []
    relevance = {}  # (claim_id, candidate_id) -> (entity, evidence)
    claim_topics = {}

    text_axes = [unit([rng.gauss(0, 1) for _ in range(TEXT_DIM)]) for _ in TOPICS]
    cross_axes = [unit([rng.gauss(0, 1) for _ in range(CROSS_DIM)]) for _ in TOPICS]

    for t, (word, claim_text, label, facts, captions) in enumerate(TOPICS):
        cid = f"c{t + 1:02d}"
        claim_topics[cid] = t
        gold_s, gold_i = [], []
        # Two documents per topic: one carries the facts, one only mentions the topic.
        for half in range(2):
            did = f"d{2 * t + half + 1:02d}"
            sentences = []
            if half == 0:
                sentences.extend(facts)
                sentences.append(rng.choice(FILLER))
            else:
                sentences.append(f"Earlier coverage of the {word} story appeared last year.")
                sentences.append(rng.choice(FILLER))
                sentences.append(rng.choice(FILLER))
            images = []
            if half == 0:
                for k, cap in enumerate(captions):
                    images.append({"image_id": f"{did}-i{k}", "uri": f"file://images/{did}_{k}.jpg",
                                   "alt_text": cap})
            elif t % 3 == 0:
                images.append({"image_id": f"{did}-i0", "uri": f"file://images/{did}_0.jpg"})
            if t == 5 and half == 1:
                # Raw text path, segmented on load.
                rec = {"doc_id": did, "raw_text": " ".join(sentences), "source": "wire"}
            else:
                rec = {"doc_id": did, "sentences": [{"sent_id": f"{did}-s{k}", "text": s}
                                                    for k, s in enumerate(sentences)]}
            if images:
                rec["images"] = images
            docs.append(rec)

            for k, s in enumerate(sentences):
                sid = f"{did}-s{k}"
                is_fact = half == 0 and k < len(facts)
                mentions = word in s.lower() or is_fact
                if is_fact:
                    gold_s.append(sid)
                    vec = noisy(rng, text_axes[t], 0.35)
                elif mentions:
                    vec = noisy(rng, text_axes[t], 0.9)
                else:
                    vec = unit([rng.gauss(0, 1) for _ in range(TEXT_DIM)])
                text_emb.append({"id": sid, "space": "text", "vector": rnd(vec)})
                relevance[(cid, sid)] = (mentions, is_fact)
            for img in images:
                iid = img["image_id"]
                is_gold = half == 0 and label != "nei"
                if is_gold:
                    gold_i.append(iid)
                    vec = noisy(rng, cross_axes[t], 0.4)
                else:
                    vec = noisy(rng, cross_axes[t], 1.2)
                cross_emb.append({"id": iid, "space": "crossmodal", "vector": rnd(vec)})
                relevance[(cid, iid)] = (True, is_gold)

        claim = {"claim_id": cid, "text": claim_text, "gold_label": label,
                 "gold_sentence_ids": gold_s}
        if gold_i:
            claim["gold_image_ids"] = gold_i
        claims.append(claim)
        text_emb.append({"id": cid, "space": "text", "vector": rnd(noisy(rng, text_axes[t], 0.3))})
        cross_emb.append({"id": cid, "space": "crossmodal", "vector": rnd(noisy(rng, cross_axes[t], 0.3))})

    return docs, claims, text_emb + cross_emb, relevance, claim_topics


def items(docs):
    out = []
    for d in docs:
        n = len(d["sentences"]) if "sentences" in d else 3
        for k in range(n):
            out.append(f"{d['doc_id']}-s{k}")
        for img in d.get("images", []):
            out.append(img["image_id"])
    return out


def mass_line(task, cid, cand, cls, masses):
    rec = {"task": task, "claim_id": cid, "candidate_id": cand, "class": cls, "class_mass": masses}
    return rec


VERDICT_ANSWERS = {
    "supported": [("verify", "yes", {"yes": 0.8, "no": 0.1, "none": 0.05}),
                  ("sufficiency", "yes", {"yes": 0.85, "no": 0.1}),
                  ("stance", "yes", {"yes": 0.9, "no": 0.05})],
    "refuted": [("verify", "no", {"yes": 0.1, "no": 0.8, "none": 0.05}),
                ("sufficiency", "yes", {"yes": 0.75, "no": 0.2}),
                ("stance", "no", {"yes": 0.1, "no": 0.85})],
    "nei": [("verify", "none", {"yes": 0.1, "no": 0.1, "none": 0.7}),
            ("sufficiency", "no", {"yes": 0.2, "no": 0.75}),
            ("stance", "yes", {"yes": 0.5, "no": 0.45})],
}


def perfect_script(docs, claims):
    lines = []
    for c in claims:
        gold = set(c["gold_sentence_ids"]) | set(c.get("gold_image_ids", []))
        for cand in sorted(gold):
            lines.append(mass_line("relevance", c["claim_id"], cand, "yes", {"yes": 0.9, "no": 0.05}))
        for task, cls, m in VERDICT_ANSWERS[c["gold_label"]]:
            lines.append(mass_line(task, c["claim_id"], "*", cls, m))
    return lines


def adversarial_script(docs, claims):
    lines = []
    all_items = items(docs)
    for c in claims:
        gold = set(c["gold_sentence_ids"]) | set(c.get("gold_image_ids", []))
        for cand in all_items:
            if cand in gold:
                lines.append(mass_line("relevance", c["claim_id"], cand, "no", {"yes": 0.05, "no": 0.9}))
            else:
                lines.append(mass_line("relevance", c["claim_id"], cand, "yes", {"yes": 0.9, "no": 0.05}))
    return lines


def mixed_script(rng, docs, claims):
    lines = []
    all_items = items(docs)
    for c in claims:
        gold = set(c["gold_sentence_ids"]) | set(c.get("gold_image_ids", []))
        for cand in all_items:
            roll = rng.random()
            if cand in gold:
                yes = round(0.35 + 0.6 * rng.random(), 4)
                no = round((1 - yes) * rng.random(), 4)
            else:
                no = round(0.3 + 0.6 * rng.random(), 4)
                yes = round((1 - no) * rng.random(), 4)
            none = round(max(0.0, 1 - yes - no) * 0.3, 4)
            if roll < 0.04:
                lines.append(mass_line("relevance", c["claim_id"], cand, "other", {"yes": 0.0, "no": 0.0}))
                continue
            cls = "yes" if yes > no else "no"
            if roll > 0.95:
                cls = "none"
            lines.append(mass_line("relevance", c["claim_id"], cand, cls,
                                   {"yes": yes, "no": no, "none": none}))
        for task, cls, m in VERDICT_ANSWERS[c["gold_label"]]:
            lines.append(mass_line(task, c["claim_id"], "*", cls, m))
        if c["claim_id"] == "c05":
            # Misleading stance answers: the scripted verdict for this claim is wrong.
            lines[-1] = mass_line("stance", "c05", "*", "yes", {"yes": 0.6, "no": 0.3})
            lines[-3] = mass_line("verify", "c05", "*", "yes", {"yes": 0.55, "no": 0.35, "none": 0.05})
        # A dissenting vote on the first gold sentence.
        first = c["gold_sentence_ids"][0]
        lines.append(mass_line("verify", c["claim_id"], first, "no", {"yes": 0.3, "no": 0.45, "none": 0.2}))
    return lines


def annotations(relevance, claim_topics):
    out = []
    for (cid, cand), (entity, evidence) in sorted(relevance.items()):
        if cid in ("c09", "c10"):
            continue
        out.append({"claim_id": cid, "candidate_id": cand,
                    "modality": "image" if "-i" in cand else "text",
                    "entity_level": bool(entity), "evidence_level": bool(evidence),
                    "overall": bool(entity or evidence)})
    return out


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for r in rows:
            f.write(json.dumps(r, sort_keys=True, ensure_ascii=False) + "\n")


def config(mock, out_dir, **over):
    c = {
        "paths": {"corpus": "corpus.jsonl", "claims": "claims.jsonl",
                  "embeddings": "embeddings.jsonl", "annotations": "annotations.jsonl",
                  "mock_script": mock},
        "retrieval": {"N": 20, "K_values": [1, 2, 5, 10], "K_evidence": 3},
        "rerank": {"strategy": "gais-yn", "lambda": 1e-4},
        "verify": {"text_mode": "one-level", "multimodal_mode": "two-level", "modality": "multimodal"},
        "out_dir": out_dir,
        "jobs": 1,
    }
    for k, v in over.items():
        c[k].update(v) if isinstance(v, dict) else c.__setitem__(k, v)
    return c


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "tests/data/toy"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    rng = random.Random(SEED)
    docs, claims, emb, relevance, topics = build(rng)
    write_jsonl(out / "corpus.jsonl", docs)
    write_jsonl(out / "claims.jsonl", claims)
    write_jsonl(out / "embeddings.jsonl", emb)
    write_jsonl(out / "annotations.jsonl", annotations(relevance, topics))
    write_jsonl(out / "mock_perfect.jsonl", perfect_script(docs, claims))
    write_jsonl(out / "mock_adversarial.jsonl", adversarial_script(docs, claims))
    write_jsonl(out / "mock_mixed.jsonl", mixed_script(random.Random(SEED + 1), docs, claims))

    for name, cfg in {
        "config.json": config("mock_mixed.jsonl", "out"),
        "config_perfect.json": config("mock_perfect.jsonl", "out_perfect"),
        "config_adversarial.json": config("mock_adversarial.jsonl", "out_adversarial"),
    }.items():
        (out / name).write_text(json.dumps(cfg, indent=2, sort_keys=True) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
