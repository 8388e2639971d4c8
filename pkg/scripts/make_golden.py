"""Regenerate the multi-layer golden reference image used by the tests.

Run from the repo root: python3 scripts/make_golden.py
Commit the refreshed tests/golden/scene.png together with any renderer
change that intentionally alters output.
"""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from util_fixtures import make_marker_png  # noqa: E402
from scene import render_reference_scene  # noqa: E402

GOLDEN = ROOT / "tests" / "golden"


def main():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    img = render_reference_scene()
    from terramap.render import write_png

    write_png(img, GOLDEN / "scene.png")
    print(f"wrote {GOLDEN / 'scene.png'} ({img.shape[1]}x{img.shape[0]})")


if __name__ == "__main__":
    main()
