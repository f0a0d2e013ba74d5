#!/usr/bin/env python3
"""Fetch and normalize the benchmark datasets into data/.

Produces plain edge-list files (one edge per line, two whitespace-separated
tokens) and label files (node token followed by its label tokens), the two
formats the tne CLI consumes.

Usage:
    python3 scripts/fetch_datasets.py [--raw-dir DIR] [--out-dir data]
                                      [--mirror-prefix URL] [--only NAME ...]

Sources (canonical):
    karate    built from networkx's copy of Zachary's karate club
    citeseer  https://github.com/shchur/gnn-benchmark  (data/npz/citeseer.npz,
              the LINQS CiteSeer citation graph over the 3312 content papers)
    cora      https://github.com/jcatw/scnn  (raw LINQS cora.cites / cora.content)
    ppi       https://github.com/xiangyue9607/BioNEV  (node2vec Homo sapiens PPI)
    facebook  https://snap.stanford.edu/data/facebook_combined.txt.gz
              (mirrored at github.com/lucashu1/link-prediction)
    gnutella  https://snap.stanford.edu/data/p2p-Gnutella08.txt.gz  (no known
              git mirror; downloaded only when SNAP is reachable)
    arxiv     https://snap.stanford.edu/data/ca-GrQc.txt.gz  (same caveat)

--mirror-prefix rewrites github.com raw URLs through a proxy, e.g.
    --mirror-prefix https://artifactory.example.com/artifactory/github
"""

import argparse
import gzip
import io
import os
import pickle
import sys
import urllib.request

GITHUB_FILES = {
    "citeseer.npz": "shchur/gnn-benchmark/raw/master/data/npz/citeseer.npz",
    "cora.cites": "jcatw/scnn/raw/master/scnn/data/cora/cora.cites",
    "cora.content": "jcatw/scnn/raw/master/scnn/data/cora/cora.content",
    "ppi.edgelist": "xiangyue9607/BioNEV/raw/master/data/node2vec_PPI/node2vec_PPI.edgelist",
    "ppi.labels": "xiangyue9607/BioNEV/raw/master/data/node2vec_PPI/node2vec_PPI_labels.txt",
    "facebook_combined.txt": "lucashu1/link-prediction/raw/master/facebook/facebook_combined.txt",
}

SNAP_FILES = {
    "p2p-Gnutella08.txt.gz": "https://snap.stanford.edu/data/p2p-Gnutella08.txt.gz",
    "ca-GrQc.txt.gz": "https://snap.stanford.edu/data/ca-GrQc.txt.gz",
}

KARATE_EDGES = [
    (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (0, 7), (0, 8), (0, 10),
    (0, 11), (0, 12), (0, 13), (0, 17), (0, 19), (0, 21), (0, 31), (1, 2),
    (1, 3), (1, 7), (1, 13), (1, 17), (1, 19), (1, 21), (1, 30), (2, 3),
    (2, 7), (2, 8), (2, 9), (2, 13), (2, 27), (2, 28), (2, 32), (3, 7),
    (3, 12), (3, 13), (4, 6), (4, 10), (5, 6), (5, 10), (5, 16), (6, 16),
    (8, 30), (8, 32), (8, 33), (9, 33), (13, 33), (14, 32), (14, 33),
    (15, 32), (15, 33), (18, 32), (18, 33), (19, 33), (20, 32), (20, 33),
    (22, 32), (22, 33), (23, 25), (23, 27), (23, 29), (23, 32), (23, 33),
    (24, 25), (24, 27), (24, 31), (25, 31), (26, 29), (26, 33), (27, 33),
    (28, 31), (28, 33), (29, 32), (29, 33), (30, 32), (30, 33), (31, 32),
    (31, 33), (32, 33),
]
# Zachary's observed split after the fission (instructor faction = 0).
KARATE_FACTION = {
    0: 0, 1: 0, 2: 0, 3: 0, 4: 0, 5: 0, 6: 0, 7: 0, 8: 0, 9: 1, 10: 0,
    11: 0, 12: 0, 13: 0, 14: 1, 15: 1, 16: 0, 17: 0, 18: 1, 19: 0, 20: 1,
    21: 0, 22: 1, 23: 1, 24: 1, 25: 1, 26: 1, 27: 1, 28: 1, 29: 1, 30: 1,
    31: 1, 32: 1, 33: 1,
}


def fetch(url, dest):
    if os.path.exists(dest):
        return dest
    print(f"  fetching {url}")
    with urllib.request.urlopen(url) as r, open(dest, "wb") as f:
        f.write(r.read())
    return dest


def write_edges(path, edges):
    with open(path, "w") as f:
        for u, v in edges:
            f.write(f"{u} {v}\n")
    print(f"  wrote {path} ({len(edges)} lines)")


def write_labels(path, labels):
    with open(path, "w") as f:
        for node in sorted(labels):
            f.write(f"{node} {' '.join(str(l) for l in sorted(labels[node]))}\n")
    print(f"  wrote {path} ({len(labels)} nodes)")


def prep_karate(raw, out):
    write_edges(os.path.join(out, "karate.edgelist"), KARATE_EDGES)
    write_labels(os.path.join(out, "karate.labels"),
                 {n: [f] for n, f in KARATE_FACTION.items()})


def prep_citeseer(raw, out):
    import numpy as np
    import scipy.sparse as sp

    d = np.load(os.path.join(raw, "citeseer.npz"), allow_pickle=True)
    adj = sp.csr_matrix((d["adj_data"], d["adj_indices"], d["adj_indptr"]),
                        shape=d["adj_shape"])
    sym = adj.maximum(adj.T).tocoo()
    edges = sorted({(min(u, v), max(u, v)) for u, v in zip(sym.row, sym.col)})
    # keep self-loop lines: the loader drops and counts them, and they keep
    # otherwise-isolated papers in the node dictionary
    write_edges(os.path.join(out, "citeseer.edgelist"), edges)
    present = {u for e in edges for u in e}
    labels = {i: [int(l)] for i, l in enumerate(d["labels"]) if i in present}
    write_labels(os.path.join(out, "citeseer.labels"), labels)


def prep_cora(raw, out):
    edges = set()
    nodes = set()
    with open(os.path.join(raw, "cora.cites")) as f:
        for line in f:
            a, b = line.split()
            nodes.update((a, b))
            if a != b:
                edges.add((min(a, b), max(a, b)))
    write_edges(os.path.join(out, "cora.edgelist"), sorted(edges))
    labels = {}
    with open(os.path.join(raw, "cora.content")) as f:
        classes = {}
        for line in f:
            parts = line.split()
            node, cls = parts[0], parts[-1]
            if node in nodes:
                labels[node] = [classes.setdefault(cls, len(classes))]
    write_labels(os.path.join(out, "cora.labels"), labels)


def prep_ppi(raw, out):
    edges = set()
    with open(os.path.join(raw, "ppi.edgelist")) as f:
        for line in f:
            parts = line.split()
            a, b = int(parts[0]), int(parts[1])
            edges.add((min(a, b), max(a, b)))
    write_edges(os.path.join(out, "ppi.edgelist"), sorted(edges))
    present = {u for e in edges for u in e}
    labels = {}
    with open(os.path.join(raw, "ppi.labels")) as f:
        for line in f:
            parts = line.split()
            node, lab = int(parts[0]), int(parts[1])
            if node in present:
                labels.setdefault(node, set()).add(lab)
    write_labels(os.path.join(out, "ppi.labels"), labels)


def prep_facebook(raw, out):
    edges = set()
    with open(os.path.join(raw, "facebook_combined.txt")) as f:
        for line in f:
            a, b = int(line.split()[0]), int(line.split()[1])
            if a != b:
                edges.add((min(a, b), max(a, b)))
    write_edges(os.path.join(out, "facebook.edgelist"), sorted(edges))


def prep_snap_gz(raw, out, gz_name, out_name):
    path = os.path.join(raw, gz_name)
    if not os.path.exists(path):
        print(f"  {gz_name} not available; skipping {out_name}")
        return
    edges = set()
    with gzip.open(path, "rt") as f:
        for line in f:
            if line.startswith("#"):
                continue
            a, b = line.split()
            if a != b:
                edges.add((min(a, b, key=int), max(a, b, key=int)))
    write_edges(os.path.join(out, out_name), sorted(edges, key=lambda e: (int(e[0]), int(e[1]))))


PREP = {
    "karate": prep_karate,
    "citeseer": prep_citeseer,
    "cora": prep_cora,
    "ppi": prep_ppi,
    "facebook": prep_facebook,
    "gnutella": lambda raw, out: prep_snap_gz(raw, out, "p2p-Gnutella08.txt.gz", "gnutella.edgelist"),
    "arxiv": lambda raw, out: prep_snap_gz(raw, out, "ca-GrQc.txt.gz", "arxiv.edgelist"),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--raw-dir", default="data/raw")
    ap.add_argument("--out-dir", default="data")
    ap.add_argument("--mirror-prefix", default="https://github.com",
                    help="prefix for github raw URLs")
    ap.add_argument("--only", nargs="*", default=sorted(PREP))
    args = ap.parse_args()

    os.makedirs(args.raw_dir, exist_ok=True)
    os.makedirs(args.out_dir, exist_ok=True)

    needed = {
        "citeseer": ["citeseer.npz"],
        "cora": ["cora.cites", "cora.content"],
        "ppi": ["ppi.edgelist", "ppi.labels"],
        "facebook": ["facebook_combined.txt"],
    }
    for name in args.only:
        for fname in needed.get(name, []):
            url = f"{args.mirror_prefix}/{GITHUB_FILES[fname]}"
            fetch(url, os.path.join(args.raw_dir, fname))
        if name in ("gnutella", "arxiv"):
            gz = "p2p-Gnutella08.txt.gz" if name == "gnutella" else "ca-GrQc.txt.gz"
            try:
                fetch(SNAP_FILES[gz], os.path.join(args.raw_dir, gz))
            except Exception as e:
                print(f"  could not fetch {gz}: {e}")

    for name in args.only:
        print(f"preparing {name}")
        PREP[name](args.raw_dir, args.out_dir)


if __name__ == "__main__":
    main()
