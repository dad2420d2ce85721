"""Smoke test for the ``ihara`` extension module.

Build first with ``cargo build -p ihara-py --features extension-module --release``
(or install with ``pip install .``). When ``ihara`` is not importable, the
library is loaded from ``target/release`` or ``target/debug``.
"""

import cmath
import importlib.util
import pathlib
import shutil
import sys
import tempfile


def load():
    try:
        import ihara

        return ihara
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    for profile in ("release", "debug"):
        for name in ("libihara.so", "libihara.dylib", "ihara.dll"):
            built = root / "target" / profile / name
            if built.exists():
                suffix = ".pyd" if name.endswith(".dll") else ".so"
                tmp = pathlib.Path(tempfile.mkdtemp()) / ("ihara" + suffix)
                shutil.copy(built, tmp)
                loader_spec = importlib.util.spec_from_file_location("ihara", tmp)
                module = importlib.util.module_from_spec(loader_spec)
                loader_spec.loader.exec_module(module)
                return module
    sys.exit("ihara extension not found; build it with cargo build -p ihara-py --features extension-module")


def main():
    ihara = load()

    k4 = ihara.Graph.complete(4)
    zr = ihara.zeta_inverse(k4)
    assert zr.bass_identity_holds()
    assert zr.bass_det[0] == 1 and len(zr.bass_det) == 9
    assert zr.bass_exponent == 2
    # (1 - z^2)^2 (1 - z)(1 - 2z)(1 + z + 2z^2)^3 at z = 0.1
    z = 0.1
    expected = (1 - z * z) ** 2 * (1 - z) * (1 - 2 * z) * (1 + z + 2 * z * z) ** 3
    assert abs(zr.evaluate(complex(z, 0)) - expected) < 1e-12

    c5 = ihara.Graph.cycle(5)
    assert ihara.closed_geodesic_counts(c5, 10) == [0, 0, 0, 0, 10, 0, 0, 0, 0, 10]
    assert ihara.primitive_cycle_counts(c5, 10) == {5: 2}
    assert ihara.Graph.from_json(c5.to_json()).dart_count == 10

    try:
        ihara.Graph(2, [0, 1, 1], [1, 2, 0])
    except ValueError as e:
        assert "dart 0" in str(e)
    else:
        raise AssertionError("malformed involution accepted")

    k2 = ihara.Graph.complete(2)
    moebius = ihara.VoltageAssignment(ihara.Graph.cycle(3), k2, {0: [1, 0]})
    total = moebius.build_bundle()
    assert total.vertex_count == 6 and total.degrees() == [3] * 6
    assert moebius.decomposed_adjacency() == total.adjacency()

    r = ihara.dihedral_factors(ihara.Graph.cycle(4), 5, [1, 4], complex(0.05, 0.1), seed=3)
    assert abs(r["assembled"] - r["exact"]) < 1e-9
    assert len(r["g"]) == 2 and r["h"] is None

    levels = ihara.grigorchuk_tower(8, [0.05])[0]
    closed = ihara.grigorchuk_log_zeta(0.05)
    assert abs(levels[-1] - closed) < 1e-2
    raw = ihara.grigorchuk_log_zeta(0.05, raw=True)
    assert abs(levels[-1] - raw) > 0.5
    assert cmath.isclose(ihara.grigorchuk_log_zeta(0), 0)

    print("smoke test passed")


if __name__ == "__main__":
    main()
