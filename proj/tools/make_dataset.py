#!/usr/bin/env python3
"""Generator for the bundled mock bidding datasets.

Builds data/mock28 (56 reviewers, 28 papers, 2 authors per paper, group-size
histogram {2:6, 3:2, 4:8} plus 6 solo reviewers, 35 honest and 31 malicious
responses with strategy annotations) and data/mini (an 8x8 smoke fixture).
Output is deterministic for a fixed seed; the checked-in datasets were
produced by running this script as-is.

Usage: python3 tools/make_dataset.py [data-dir]
"""
import os
import sys
from collections import Counter

import numpy as np

TOPICS = ["Humans and AI", "Social choice theory", "Game theory",
          "Probabilistic modeling", "Search", "Optimization", "Machine learning"]
# areas per topic: 3,3,5,4,3,3,4 = 25
TOPIC_AREAS = [list(range(0, 3)), list(range(3, 6)), list(range(6, 11)),
               list(range(11, 15)), list(range(15, 18)), list(range(18, 21)),
               list(range(21, 25))]
AREA_TOPIC = {}
for t, areas in enumerate(TOPIC_AREAS):
    for a in areas:
        AREA_TOPIC[a] = t

AREA_NAMES = [
    "Human-AI collaboration", "Interactive systems", "Crowdsourcing",
    "Voting theory", "Fair division", "Matching markets",
    "Equilibrium computation", "Mechanism design", "Auctions",
    "Repeated games", "Security games",
    "Bayesian networks", "Graphical models", "Causal inference", "Probabilistic programming",
    "Heuristic search", "Planning", "Constraint satisfaction",
    "Convex optimization", "Integer programming", "Stochastic optimization",
    "Deep learning", "Reinforcement learning", "Online learning", "Learning theory",
]
assert len(AREA_NAMES) == 25

STRATS = ["Basic", "Negative-in-area", "Overlap", "Cycle", "Popularity"]

# group layout: (size, home_topic, strategy or None, n_responding_malicious)
GROUPS = [
    (2, 4, "Popularity", 2),        # G0 (active; cross-paired with G2)
    (2, 0, "Basic", 2),             # G1
    (2, 4, "Basic", 2),             # G2 (active; cross-paired with G0)
    (2, 6, "Negative-in-area", 2),  # G3
    (2, 2, None, 0),                # G4
    (2, 1, None, 0),                # G5
    (3, 1, "Basic", 2),             # G6
    (3, 2, "Negative-in-area", 3),  # G7
    (4, 5, "Cycle", 4),             # G8
    (4, 6, "Overlap", 3),           # G9
    (4, 1, "none", 2),              # G10 (-1 annotations)
    (4, 2, "Basic", 3),             # G11
    (4, 3, "Negative-in-area", 2),  # G12
    (4, 6, None, 0),                # G13
    (4, 0, None, 0),                # G14
    (4, 3, None, 0),                # G15
]
CROSS_PAIRED = (0, 2)   # Popularity group co-authors with this Basic group
OVERLAP_GID = 9
OVERLAP_DONOR = 11      # Overlap members share this group's canonical area
# solos: (home_topic, strategy or None)
SOLOS = [(1, "Basic"), (6, "Basic"), (2, "Negative-in-area"),
         (3, "Negative-in-area"), (0, None), (5, None)]

ACTIVE_STRATS = {"Basic", "Negative-in-area", "Overlap", "Cycle", "Popularity"}

# Tuned bid-distribution parameters; changing any of these (or SEED) produces
# a different dataset, which invalidates the frozen expectations in tests.
PARAMS = dict(hon_exact3=0.5, hon_pos_range=(5, 9), hon_neg_range=(7, 14),
              bas_neg_range=(7, 15), nia_neg_range=(11, 19),
              ovl_neg_range=(9, 17), cyc_neg_range=(5, 10),
              nia_frac=0.12, overlap_k=4, popular_w=4.0, popular_p=0.6,
              protect_w=0.02, hon_nia_frac=0.2, recip_p=0.2,
              pop_out_p=0.55, pop_nia_frac=1.0,
              none_pos_p=0.5, none_neg_p=0.5)
SEED = 13

STRAT_INDEX = {"Basic": 0, "Negative-in-area": 1, "Overlap": 2, "Cycle": 3,
               "Popularity": 4, "none": -1}
BID_STR = {-1: "Not willing to review", 0: "Indifferent", 1: "Eager to review"}


class Dataset:
    pass


def build(seed, params):
    rng = np.random.default_rng(seed)
    ds = Dataset()
    ds.area_topic = AREA_TOPIC

    rev_group, rev_home, rev_strat = [], [], []
    group_members = {}
    for gid, (size, topic, strat, nresp) in enumerate(GROUPS):
        members = []
        for i in range(size):
            rid = len(rev_group)
            rev_group.append(gid)
            rev_home.append(topic)
            rev_strat.append(strat if i < nresp else None)
            members.append(rid)
        group_members[gid] = members
    solo_ids = []
    for topic, strat in SOLOS:
        rid = len(rev_group)
        rev_group.append(None)
        rev_home.append(topic)
        rev_strat.append(strat)
        solo_ids.append(rid)
    R = len(rev_group)
    assert R == 56

    # --- canonical areas for active groups; cross-paired groups share one
    active_groups = {g for g, spec in enumerate(GROUPS)
                     if spec[2] in ACTIVE_STRATS and spec[3] > 0}
    canonical = {}
    for g in sorted(active_groups):
        canonical[g] = int(rng.choice(TOPIC_AREAS[GROUPS[g][1]]))
    a, b = CROSS_PAIRED
    canonical[a] = canonical[b]

    # --- authorship: active members are first authors; the cross-pair
    # consumes two active members per paper. Remaining inactive reviewers are
    # paired per a fixed block plan so that every group (active or not) ends up
    # area-coherent: all of a group's papers use at most 3 distinct areas that
    # every member carries.
    pairs = []
    ga, gb = group_members[CROSS_PAIRED[0]], group_members[CROSS_PAIRED[1]]
    for x, y in zip(gb, ga):          # Basic member first-author
        pairs.append((x, y))
    # inactive unit -> active groups supplying co-author partners, in order
    partner_plan = [
        (group_members[4], [7, 7]),
        (group_members[5], [11, 11]),
        (group_members[10], [6, 6, 6, 8]),
        (group_members[13], [9, 9, 9, 9]),
        (group_members[14], [1, 1, 8, 8]),
        (group_members[15], [12, 12, 12, 12]),
        ([solo_ids[0]], [11]),
        ([solo_ids[1]], [3]),
        ([solo_ids[2]], [11]),
        ([solo_ids[3]], [7]),
        ([solo_ids[4]], [3]),
        ([solo_ids[5]], [8]),
    ]
    next_member = {g: 0 for g in active_groups}
    for members, srcs in partner_plan:
        for q, g in zip(members, srcs):
            r = group_members[g][next_member[g]]
            next_member[g] += 1
            pairs.append((r, q))
    assert len(pairs) == 28, len(pairs)
    assert len({q for _, q in pairs} | {r for r, _ in pairs}) == 56

    paper_area, authors = [], []
    rev_areas = [set() for _ in range(R)]
    rev_authored = [None] * R
    for pid, (x, y) in enumerate(pairs):
        area = canonical[rev_group[x]]
        paper_area.append(area)
        authors.append((x, y))
        rev_areas[x].add(area)
        rev_areas[y].add(area)
        rev_authored[x] = pid
        rev_authored[y] = pid

    # Overlap members also carry the donor group's canonical area so their
    # shared positive bids can saturate their review loads off-target
    for r in group_members[OVERLAP_GID]:
        rev_areas[r].add(canonical[OVERLAP_DONOR])

    # inactive groups: every member carries all of the group's paper areas,
    # mirroring the shared-expertise group construction of the active groups
    for g, (size, topic, strat, nresp) in enumerate(GROUPS):
        if g in active_groups:
            continue
        members = group_members[g]
        shared = {paper_area[rev_authored[m]] for m in members}
        assert len(shared) <= 3, (g, shared)
        for m in members:
            rev_areas[m].update(shared)

    # --- fill areas to exactly 3: two from the home topic plus one from a
    # second topic, so nobody's candidate pool collapses to a couple papers
    for r in range(R):
        home = list(TOPIC_AREAS[rev_home[r]])
        rng.shuffle(home)
        for ar in home:
            if len(rev_areas[r]) >= 2:
                break
            rev_areas[r].add(ar)
        if len(rev_areas[r]) < 3:
            other = int(rng.integers(0, 7))
            while other == rev_home[r]:
                other = int(rng.integers(0, 7))
            rev_areas[r].add(int(rng.choice(TOPIC_AREAS[other])))
        while len(rev_areas[r]) < 3:
            rev_areas[r].add(int(rng.integers(0, 25)))
    rev_areas = [sorted(s) for s in rev_areas]

    def Ascore(r, p):
        if paper_area[p] in rev_areas[r]:
            return 1.0
        if AREA_TOPIC[paper_area[p]] in {AREA_TOPIC[x] for x in rev_areas[r]}:
            return 0.5
        return 0.0

    ds.Ascore = Ascore

    overlap_paper_ids = {rev_authored[q] for q in group_members[OVERLAP_GID]}

    # --- solo targets: in-area, not their own, not an Overlap-group paper
    rev_target = [None] * R
    for r in solo_ids:
        cands = [p for p in range(28)
                 if paper_area[p] in rev_areas[r] and p != rev_authored[r]
                 and p not in overlap_paper_ids]
        if not cands:
            cands = [p for p in range(28) if Ascore(r, p) >= 0.5
                     and p != rev_authored[r] and p not in overlap_paper_ids]
        if not cands:
            cands = [p for p in range(28) if p != rev_authored[r]]
        rev_target[r] = int(rng.choice(cands))

    ds.R, ds.P = R, 28
    ds.rev_areas = rev_areas
    ds.rev_group = [g if g is not None else None for g in rev_group]
    ds.rev_home = rev_home
    ds.rev_strat = rev_strat
    ds.rev_authored = rev_authored
    ds.rev_target = rev_target
    ds.paper_area = paper_area
    ds.authors = authors
    ds.group_members = group_members
    ds.solo_ids = solo_ids

    ds.targets = [set() for _ in range(R)]
    for g, members in group_members.items():
        for r in members:
            ds.targets[r] = {rev_authored[q] for q in members if q != r}
    for r in solo_ids:
        ds.targets[r] = {rev_target[r]}

    # --- responders
    mal_resp = [r for r in range(R) if rev_strat[r] is not None]
    assert len(mal_resp) == 31, len(mal_resp)
    silent_all = [r for r in range(R) if rev_strat[r] is None]
    extra_honest = [int(x) for x in rng.choice(silent_all, size=4, replace=False)]
    hon_resp = sorted(mal_resp + extra_honest)
    ds.hon_resp = hon_resp
    ds.mal_resp = mal_resp

    # popular papers (Overlap group's own) attract honest bids; every other
    # active target is lightly avoided by honest bidders
    popular = set(overlap_paper_ids)
    protected = set()
    for r in mal_resp:
        protected |= ds.targets[r]
    protected -= popular
    ds.popular, ds.protected = popular, protected

    # --- honest bids
    HB = np.zeros((R, 28), dtype=int)
    for r in hon_resp:
        cands = [p for p in range(28) if Ascore(r, p) >= 0.5 and p != rev_authored[r]]
        out = [p for p in range(28) if Ascore(r, p) == 0.0 and p != rev_authored[r]]
        if rng.random() < params["hon_exact3"]:
            npos = 3
        else:
            npos = int(rng.integers(*params["hon_pos_range"]))
        npos = min(npos, len(cands))
        if not cands:
            cands = [p for p in range(28) if p != rev_authored[r]]
            npos = 3
        w = np.array([(params["popular_w"] if p in popular else
                       (params["protect_w"] if p in protected else 1.0))
                      for p in cands], dtype=float)
        w = w / w.sum()
        w[-1] = 1.0 - w[:-1].sum()
        pos = [int(x) for x in rng.choice(cands, size=npos, replace=False, p=w)]
        # extra boost: eager in-area bids on the popular papers
        for p in popular:
            if Ascore(r, p) >= 0.5 and p != rev_authored[r] and p not in pos:
                if rng.random() < params["popular_p"]:
                    pos.append(p)
        nneg = int(rng.integers(*params["hon_neg_range"]))
        negc = [p for p in out if p not in pos]
        neg = [int(x) for x in rng.choice(negc, size=min(nneg, len(negc)), replace=False)]
        for p in pos:
            HB[r, p] = 1
        for p in neg:
            HB[r, p] = -1
        # idiosyncratic in-topic negatives
        for p in cands:
            if HB[r, p] == 0 and rng.random() < params["hon_nia_frac"]:
                HB[r, p] = -1
    # reciprocity: colleagues tend to bid on each other's papers
    for r in hon_resp:
        for q in hon_resp:
            if q == r or rev_authored[q] == rev_authored[r]:
                continue
            if HB[r, rev_authored[q]] == 1 and HB[q, rev_authored[r]] != 1:
                if rng.random() < params["recip_p"]:
                    HB[q, rev_authored[r]] = 1
    ds.HB = HB

    # --- malicious bids
    MB = np.zeros((R, 28), dtype=int)

    def fill_background(r, avoid, neg_range, nia_frac, pos_extra):
        in_area = [p for p in range(28) if Ascore(r, p) >= 0.5
                   and p != rev_authored[r] and p not in avoid]
        out = [p for p in range(28) if Ascore(r, p) == 0.0
               and p != rev_authored[r] and p not in avoid]
        nneg = int(rng.integers(*neg_range))
        for p in rng.choice(out, size=min(nneg, len(out)), replace=False):
            MB[r, p] = -1
        if nia_frac > 0:
            for p in in_area:
                if MB[r, p] == 0 and rng.random() < nia_frac:
                    MB[r, p] = -1
        k = int(rng.integers(0, pos_extra + 1))
        # topic-match papers only: padding bids must stay below an exact-area match
        free = [p for p in in_area if MB[r, p] == 0 and Ascore(r, p) == 0.5]
        for p in rng.choice(free, size=min(k, len(free)), replace=False):
            MB[r, p] = 1

    def orient_targets(members, silent):
        g = len(members)
        if g <= 1:
            return set()
        if g == 2:
            if silent:
                return {(members[0], members[1])}
            return {(members[0], members[1]), (members[1], members[0])}
        arcs = set()
        for i in range(g):
            arcs.add((members[i], members[(i + 1) % g]))
            if g >= 4:
                arcs.add((members[i], members[(i + 2) % g]))
        out = set()
        for (x, y) in sorted(arcs):
            if (y, x) in out:
                continue
            out.add((x, y))
        return out

    for g, (size, topic, strat, nresp) in enumerate(GROUPS):
        members = group_members[g][:nresp]
        allm = group_members[g]
        if nresp == 0:
            continue
        if strat == "Cycle":
            for i, r in enumerate(members):
                nxt = members[(i + 1) % len(members)]
                MB[r, rev_authored[nxt]] = 1
                fill_background(r, avoid=ds.targets[r] | {rev_authored[r]},
                                neg_range=params["cyc_neg_range"],
                                nia_frac=params.get("cyc_nia_frac", 0.0),
                                pos_extra=params.get("cyc_pos_extra", 0))
        elif strat == "Overlap":
            cands = sorted((p for p in range(28)
                            if Ascore(members[0], p) >= 0.5
                            and p not in {rev_authored[q] for q in allm}),
                           key=lambda p: (-min(Ascore(r, p) for r in members), p))
            shared = cands[:params["overlap_k"]]
            for r in members:
                for p in shared:
                    MB[r, p] = 1
                fill_background(r, avoid=set(shared) | ds.targets[r] | {rev_authored[r]},
                                neg_range=params.get("ovl_neg_range", params["bas_neg_range"]),
                                nia_frac=params.get("ovl_nia_frac", 0.0),
                                pos_extra=params.get("ovl_pos_extra", 0))
        elif strat == "Popularity":
            for r in members:
                for p in ds.targets[r]:
                    MB[r, p] = 1
                in_area = [p for p in range(28) if Ascore(r, p) >= 0.5
                           and p != rev_authored[r] and p not in ds.targets[r]]
                for p in rng.choice(in_area, size=min(2, len(in_area)), replace=False):
                    MB[r, p] = 1
                for p in range(28):
                    if p == rev_authored[r] or MB[r, p] != 0 or p in ds.targets[r]:
                        continue
                    a = Ascore(r, p)
                    if a == 0.0 and rng.random() < params.get("pop_out_p", 0.9):
                        MB[r, p] = -1
                    elif a >= 0.5 and rng.random() < params.get("pop_nia_frac", 0.0):
                        MB[r, p] = -1
        elif strat == "none":
            for r in members:
                pp = params.get("none_pos_p", 0.15)
                np_ = params.get("none_neg_p", 0.3)
                for p in range(28):
                    if p == rev_authored[r]:
                        continue
                    u = rng.random()
                    MB[r, p] = 1 if u < pp else (-1 if u < pp + np_ else 0)
        elif strat in ("Basic", "Negative-in-area"):
            silent = allm[nresp:]
            arcs = orient_targets(members, silent)
            nr = params["nia_neg_range"] if strat == "Negative-in-area" else params["bas_neg_range"]
            for r in members:
                for (x, y) in arcs:
                    if x == r:
                        MB[r, rev_authored[y]] = 1
                for q in silent:
                    MB[r, rev_authored[q]] = 1
                pe = (params.get("nia_pos_extra", 1) if strat == "Negative-in-area"
                      else params.get("bas_pos_extra", 1))
                fill_background(r, avoid=ds.targets[r] | {rev_authored[r]},
                                neg_range=nr,
                                nia_frac=(params["nia_frac"] if strat == "Negative-in-area" else 0.0),
                                pos_extra=pe)
        else:
            raise RuntimeError(strat)

    for r in solo_ids:
        if rev_strat[r] is None:
            continue
        MB[r, rev_target[r]] = 1
        nr = params["nia_neg_range"] if rev_strat[r] == "Negative-in-area" else params["bas_neg_range"]
        pe = (params.get("nia_pos_extra", 1) if rev_strat[r] == "Negative-in-area"
              else params.get("bas_pos_extra", 1))
        fill_background(r, avoid={rev_target[r], rev_authored[r]},
                        neg_range=nr,
                        nia_frac=(params["nia_frac"] if rev_strat[r] == "Negative-in-area" else 0.0),
                        pos_extra=pe)

    ds.MB = MB
    return ds


TITLE_PATTERNS = [
    "{}: A Unified Framework",
    "Towards Robust {}",
    "Scalable {} in Practice",
    "Revisiting {} with Structured Priors",
    "On the Complexity of {}",
    "Adaptive Methods for {}",
    "{} under Uncertainty",
    "Benchmarking {} at Scale",
    "Sample-Efficient {}",
    "A Dynamic View of {}",
]


def paper_titles(paper_area):
    titles, used = [], set()
    for p, a in enumerate(paper_area):
        base = AREA_NAMES[a]
        for k in range(len(TITLE_PATTERNS)):
            t = TITLE_PATTERNS[(p + k) % len(TITLE_PATTERNS)].format(base)
            if t not in used:
                used.add(t)
                titles.append(t)
                break
        else:
            raise RuntimeError("title collision")
    return titles


def write_subject_areas(path):
    with open(path, "w") as f:
        for a in range(25):
            f.write(f"{TOPICS[AREA_TOPIC[a]]} :: {AREA_NAMES[a]}\n")


def write_mock28(outdir, params=PARAMS, seed=SEED):
    ds = build(seed, params)
    rng = np.random.default_rng(2024)
    os.makedirs(outdir, exist_ok=True)
    names = [f"R{r:02d}" for r in range(ds.R)]
    titles = paper_titles(ds.paper_area)

    write_subject_areas(os.path.join(outdir, "subject_areas.txt"))
    with open(os.path.join(outdir, "paper_titles.txt"), "w") as f:
        f.write("\n".join(titles) + "\n")

    with open(os.path.join(outdir, "setup.csv"), "w") as f:
        f.write("name,sas,authored_sa,authored_id,target_sa,target_id,group\n")
        for r in range(ds.R):
            sas = " ".join(str(a) for a in ds.rev_areas[r])
            ap = ds.rev_authored[r]
            if ds.rev_group[r] is not None:
                f.write(f"{names[r]},{sas},{ds.paper_area[ap]},{ap},,,{ds.rev_group[r]}\n")
            else:
                tp = ds.rev_target[r]
                f.write(f"{names[r]},{sas},{ds.paper_area[ap]},{ap},"
                        f"{ds.paper_area[tp]},{tp},\n")

    def write_bids(path, B, responders, questions):
        cols = ["Name"] + [f"B{p}" for p in range(ds.P)] + \
               [f"T{i}" for i in range(len(questions))]
        row2 = [""] + titles + questions
        with open(path, "w") as f:
            f.write(",".join(cols) + "\n")
            f.write(",".join('"' + c + '"' if ("," in c) else c for c in row2) + "\n")
            for r in responders:
                cells = [names[r]]
                for p in range(ds.P):
                    b = int(B[r, p])
                    # a sprinkling of blank neutral cells, like real form data
                    if b == 0 and rng.random() < 0.1:
                        cells.append("")
                    else:
                        cells.append(BID_STR[b])
                cells += [""] * len(questions)
                f.write(",".join(cells) + "\n")

    write_bids(os.path.join(outdir, "honest_bidding.csv"), ds.HB, ds.hon_resp,
               ["Did you follow any kind of strategy when bidding and if so, what was it?"])
    write_bids(os.path.join(outdir, "malicious_bidding.csv"), ds.MB, ds.mal_resp,
               ["Did you follow any kind of strategy when bidding and if so, what was it?",
                "Did you communicate with your other group members and if so, what did you discuss?"])

    with open(os.path.join(outdir, "strategy_annotations.csv"), "w") as f:
        f.write("Name,Strategy,Discussed\n")
        for r in ds.mal_resp:
            idx = STRAT_INDEX[ds.rev_strat[r]]
            if idx == -1:
                disc = ""
            else:
                disc = "Y" if ds.rev_group[r] is not None else "N"
            f.write(f"{names[r]},{idx},{disc}\n")

    print("mock28 written:", outdir)
    print("  honest responders:", len(ds.hon_resp), " malicious:", len(ds.mal_resp))
    strat_counts = Counter(STRAT_INDEX[ds.rev_strat[r]] for r in ds.mal_resp)
    print("  strategy counts:", dict(sorted(strat_counts.items())))
    gsizes = Counter(len(m) for m in ds.group_members.values())
    print("  group sizes:", dict(sorted(gsizes.items())), " solos:", len(ds.solo_ids))
    return ds, titles


def write_mini(outdir):
    """8 reviewers, 8 papers, one author each, loads (3,3) feasible."""
    os.makedirs(outdir, exist_ok=True)
    rng = np.random.default_rng(5)
    R = P = 8
    names = [f"M{r}" for r in range(R)]
    rev_areas = [sorted(rng.choice(25, size=3, replace=False)) for _ in range(R)]
    paper_area = [int(rng.choice(rev_areas[r])) for r in range(R)]  # reviewer r authors paper r
    titles = [f"Mini Study {p}: {AREA_NAMES[paper_area[p]]}" for p in range(P)]

    groups = {0: [0, 1], 1: [2, 3, 4]}
    rev_group = [0, 0, 1, 1, 1, None, None, None]
    solo_target = {5: 2}
    strat = {0: 0, 1: 0, 2: 3, 3: 3, 4: 3, 5: 1}

    write_subject_areas(os.path.join(outdir, "subject_areas.txt"))
    with open(os.path.join(outdir, "paper_titles.txt"), "w") as f:
        f.write("\n".join(titles) + "\n")
    with open(os.path.join(outdir, "setup.csv"), "w") as f:
        f.write("name,sas,authored_sa,authored_id,target_sa,target_id,group\n")
        for r in range(R):
            sas = " ".join(map(str, rev_areas[r]))
            if rev_group[r] is not None:
                f.write(f"{names[r]},{sas},{paper_area[r]},{r},,,{rev_group[r]}\n")
            elif r in solo_target:
                tp = solo_target[r]
                f.write(f"{names[r]},{sas},{paper_area[r]},{r},{paper_area[tp]},{tp},\n")
            else:
                tp = (r + 3) % P
                f.write(f"{names[r]},{sas},{paper_area[r]},{r},{paper_area[tp]},{tp},\n")

    HB = np.zeros((R, P), dtype=int)
    MB = np.zeros((R, P), dtype=int)
    for r in range(R):
        for p in range(P):
            if p == r:
                continue
            u = rng.random()
            HB[r, p] = 1 if u < 0.3 else (-1 if u < 0.55 else 0)
    for g, members in groups.items():
        for i, r in enumerate(members):
            for q in members:
                if q != r:
                    MB[r, q] = 1
            for p in range(P):
                if p != r and MB[r, p] == 0:
                    MB[r, p] = -1
    MB[5, solo_target[5]] = 1
    for p in range(P):
        if p != 5 and MB[5, p] == 0:
            MB[5, p] = -1

    def write_bids(path, B, responders):
        q = ["Did you follow any kind of strategy when bidding and if so, what was it?"]
        with open(path, "w") as f:
            f.write(",".join(["Name"] + [f"B{p}" for p in range(P)] + ["T0"]) + "\n")
            f.write(",".join('"' + c + '"' if "," in c else c
                             for c in [""] + titles + q) + "\n")
            for r in responders:
                f.write(",".join([names[r]] + [BID_STR[int(B[r, p])] for p in range(P)] + [""]) + "\n")

    write_bids(os.path.join(outdir, "honest_bidding.csv"), HB, range(R))
    write_bids(os.path.join(outdir, "malicious_bidding.csv"), MB, sorted(strat))
    with open(os.path.join(outdir, "strategy_annotations.csv"), "w") as f:
        f.write("Name,Strategy,Discussed\n")
        for r in sorted(strat):
            f.write(f"{names[r]},{strat[r]},{'Y' if rev_group[r] is not None else 'N'}\n")
    print("mini written:", outdir)


if __name__ == "__main__":
    data_dir = sys.argv[1] if len(sys.argv) > 1 else \
        os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data")
    write_mock28(os.path.join(data_dir, "mock28"))
    write_mini(os.path.join(data_dir, "mini"))
