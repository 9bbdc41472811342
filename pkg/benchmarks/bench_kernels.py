"""Time the hot kernels under each available backend.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from stegkit import kernels
from stegkit.dct_stego import analyze
from stegkit.image_stego import PixelImage
from stegkit.net import Ipv4Header


def workloads():
    rng = np.random.default_rng(0)
    header = np.frombuffer(Ipv4Header(total_length=60, ttl=64).to_bytes(), np.uint8)
    blob = np.frombuffer(rng.bytes(65536), np.uint8)
    plane = np.cumsum(rng.integers(-3, 4, (256, 256)), axis=1) % 256
    coeffs = analyze(PixelImage(plane.astype(np.uint8))).blocks.reshape(-1)
    cap = int(_purepy_capacity(coeffs))
    bits = rng.integers(0, 2, cap, dtype=np.uint8)
    return {
        "pn_chips 1M": lambda b: b.pn_chips(12345, 1_000_000),
        "inet_checksum 20B": lambda b: b.inet_checksum(header),
        "inet_checksum 64KiB": lambda b: b.inet_checksum(blob),
        "jsteg_capacity 256x256": lambda b: b.jsteg_capacity(coeffs),
        "jsteg_embed 256x256": lambda b: b.jsteg_embed(coeffs.copy(), bits),
        "jsteg_extract 256x256": lambda b: b.jsteg_extract(coeffs, cap),
    }


def _purepy_capacity(coeffs):
    return kernels.get_backend("python").jsteg_capacity(coeffs)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = kernels.available_backends()
    print(f"{'kernel':<26}" + "".join(f"{b:>14}" for b in backends) + ("    speedup" if len(backends) > 1 else ""))
    for name, fn in workloads().items():
        times = []
        for b in backends:
            mod = kernels.get_backend(b)
            number = max(1, int(0.05 / max(timeit.timeit(lambda: fn(mod), number=1), 1e-7)))
            best = min(timeit.repeat(lambda: fn(mod), number=number, repeat=args.repeat)) / number
            times.append(best)
        row = f"{name:<26}" + "".join(f"{1e6 * t:>11.1f} us" for t in times)
        if len(times) > 1:
            row += f"  {times[1] / times[0]:>8.1f}x"
        print(row)


if __name__ == "__main__":
    main()
