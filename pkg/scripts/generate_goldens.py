"""Regenerate the checked-in golden outputs.

Run from the repository root after any intentional output change:

    python3 scripts/generate_goldens.py

Writes analysis bundles plus compact/compressed SVGs for the sample
corpus into samples/golden/, and the color vectors consumed by the
frontend parity tests into tests/golden/color_vectors.json.
"""

import json
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
SAMPLES = ROOT / "samples"
GOLDEN = SAMPLES / "golden"
VECTORS = ROOT / "tests" / "golden"

CORPUS = ("sections_tab", "chords_ties", "empty_bars")


def cli(*args):
    subprocess.run([sys.executable, "-m", "scorelens", *args],
                   check=True, cwd=ROOT, capture_output=True)


def write_corpus_outputs():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for stem in CORPUS:
        source = SAMPLES / f"{stem}.musicxml"
        bundle = GOLDEN / f"{stem}.scorelens.json"
        cli("analyze", str(source), "-o", str(bundle))
        cli("render", str(bundle), "--view", "compact",
            "-o", str(GOLDEN / f"{stem}.compact.svg"))
        cli("render", str(bundle), "--view", "compressed",
            "--color", "cluster",
            "-o", str(GOLDEN / f"{stem}.compressed.svg"))
        print("wrote goldens for", stem)


def write_color_vectors():
    """Color vectors the viewer must reproduce channel-exactly.

    Everything is computed from the golden bundle's stored (rounded)
    values, the same data the viewer sees over the wire.
    """
    sys.path.insert(0, str(ROOT / "src"))
    from scorelens.bundle import deserialize, uncondense
    from scorelens.colors import (cluster_colors, cut, get_scale, map_direct,
                                  map_identical, map_positions)

    bundle = deserialize((GOLDEN / "sections_tab.scorelens.json").read_bytes())
    level = bundle.analyses[0].levels["bar"]
    matrix = uncondense(list(level.condensed_distances), level.count)

    cases = []
    for scale_id in ("spectral", "blues"):
        scale = get_scale(scale_id)
        for threshold in (0.1, 0.3, 0.6):
            for mode in ("direct", "identical", "mds", "cluster"):
                if mode == "direct":
                    assignment = map_direct(matrix, 0, scale)
                elif mode == "identical":
                    assignment = map_identical(matrix, 0, scale)
                elif mode == "mds":
                    assignment = map_positions(level.mds_positions, scale)
                else:
                    clusters = cut(level.dendrogram, threshold)
                    assignment = cluster_colors(level.dendrogram, clusters,
                                                scale, threshold=threshold)
                cases.append({
                    "mode": mode,
                    "selected": 0 if mode in ("direct", "identical") else None,
                    "scale": scale_id,
                    "threshold": threshold,
                    "colors": [list(c) if c else None
                               for c in assignment.colors],
                })
    VECTORS.mkdir(parents=True, exist_ok=True)
    payload = {"source": "sections_tab.scorelens.json", "cases": cases}
    (VECTORS / "color_vectors.json").write_text(
        json.dumps(payload, indent=1, sort_keys=True) + "\n")
    print(f"wrote {len(cases)} color vector cases")


if __name__ == "__main__":
    write_corpus_outputs()
    write_color_vectors()
