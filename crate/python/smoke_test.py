#!/usr/bin/env python3
"""Smoke test for the pencoder_py extension module.

Build the module first, then run this script:

    cargo build -p pencoder-py
    python3 python/smoke_test.py
"""

import shutil
import sys
import tempfile
from pathlib import Path


def load_module():
    root = Path(__file__).resolve().parents[1]
    candidates = [
        root / "target" / "debug" / "libpencoder_py.so",
        root / "target" / "release" / "libpencoder_py.so",
        root / "target" / "debug" / "libpencoder_py.dylib",
        root / "target" / "release" / "libpencoder_py.dylib",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("module not built; run: cargo build -p pencoder-py")
    stage = Path(tempfile.mkdtemp(prefix="pencoder-py-"))
    shutil.copy(built, stage / "pencoder_py.so")
    sys.path.insert(0, str(stage))
    import pencoder_py

    return pencoder_py


def main():
    pe = load_module()

    tested, mismatches = pe.verify_encoder("tree", 256, strategy="random", count=2000)
    assert (tested, mismatches) == (2000, 0), (tested, mismatches)
    print("OK verify: tree n=256, 2000 random vectors, 0 mismatches")

    tested, mismatches = pe.verify_encoder("slpe", 16, strategy="exhaustive")
    assert (tested, mismatches) == (65536, 0), (tested, mismatches)
    print("OK verify: slpe n=16 exhaustive, 0 mismatches")

    c = pe.cost("2lpe", 2048)
    assert c["total"] == 26496.0, c
    c_structural = pe.cost("2lpe", 2048, mode="structural")
    assert c_structural["total"] == 26496.0, c_structural
    print("OK cost: 2lpe n=2048 -> 26496 transistors in both modes")

    d = pe.delay("tree", 1024)
    assert d == 42.0, d
    nd = pe.netlist_delay("tree", 1024)
    assert nd == pe.delay("tree", 1024, mode="structural") == 58.0, nd
    print("OK delay: tree n=1024 -> literal 42, structural/netlist 58")

    vhdl = pe.emit_hdl("slpe", 8)
    assert "entity pe_slpe_8 is" in vhdl
    assert vhdl.count(" when ") == 16
    verilog = pe.emit_hdl("slpe", 8, dialect="verilog")
    assert "module pe_slpe_8 (" in verilog
    print("OK emit: pe_slpe_8 VHDL/Verilog with 16 conditional assignments")

    assert pe.size_two_level(2048) == (64, 32)
    assert pe.size_cascaded(4096, 3) == [16, 16, 16]
    print("OK sizing: 2048 -> (64, 32); 4096/3 -> [16, 16, 16]")

    assert pe.lut_normalized(511, 194) == 576
    assert pe.lut_normalized(346, 78) == 372
    print("OK fpga: LUT_N 576 / 372")

    winners = dict(pe.recommend_architectures(objective="delay"))
    assert set(winners.values()) == {"Tree"}, winners
    print("OK recommend: delay objective picks the tree at every width")

    nl = pe.generate_netlist("recursive", 64)
    assert '"name": "pe_rec_64"' in nl
    print("OK generate: pe_rec_64 netlist JSON")

    header = pe.sweep_csv().splitlines()[0]
    assert header == "arch,n,m,mode,cost,delay,or_pct,mux_pct,pe_pct", header
    print("OK analyze: sweep CSV header stable")

    print("smoke test passed")


if __name__ == "__main__":
    main()
