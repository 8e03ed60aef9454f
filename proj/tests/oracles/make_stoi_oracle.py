#!/usr/bin/env python3
# tests/oracles/make_stoi_oracle.py
#
# Copyright 2026  The SVTS Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
# KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
# WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
# MERCHANTABLITY OR NON-INFRINGEMENT.
# See the Apache 2 License for the specific language governing permissions and
# limitations under the License.

"""Writes STOI/ESTOI reference values computed with pystoi.

Generates 20 (reference, degraded) WAV pairs of synthetic speech-like audio
under tests/data/stoi and records pystoi's scores in oracle.tsv.  The files
are committed; rerun only to regenerate them.

    pip install pystoi scipy numpy
    python3 tests/oracles/make_stoi_oracle.py
"""

import os

import numpy as np
from pystoi import stoi
from scipy.io import wavfile
from scipy.signal import lfilter

OUT = os.path.join(os.path.dirname(__file__), "..", "data", "stoi")


def speech_like(rng, fs, seconds):
    n = int(fs * seconds)
    t = np.arange(n) / fs
    f0 = 110 + 40 * rng.random() + 20 * np.sin(2 * np.pi * 0.7 * t)
    phase = 2 * np.pi * np.cumsum(f0) / fs
    src = sum(np.sin(h * phase) / h for h in range(1, 30) if h * f0.max() < fs / 2)
    # Syllable envelope with short pauses.
    rate = 3 + 2 * rng.random()
    env = np.clip(np.sin(2 * np.pi * rate * t + rng.random() * 6), 0, None) ** 0.7
    env *= (np.sin(2 * np.pi * 0.45 * t + rng.random() * 6) > -0.6)
    # Two time-varying formants approximated by switching resonators per block.
    out = np.zeros(n)
    block = int(0.08 * fs)
    zi1 = np.zeros(2)
    zi2 = np.zeros(2)
    for start in range(0, n, block):
        seg = src[start:start + block] * env[start:start + block]
        f1 = 300 + 500 * rng.random()
        f2 = 900 + 1500 * rng.random()
        for f, zi in ((f1, zi1), (f2, zi2)):
            r = np.exp(-np.pi * 120 / fs)
            a = [1, -2 * r * np.cos(2 * np.pi * f / fs), r * r]
            y, zi[:] = lfilter([1 - r], a, seg, zi=zi)
            out[start:start + block] += y
    out += 1e-4 * rng.standard_normal(n)
    return 0.5 * out / np.max(np.abs(out))


def degrade(rng, x, fs, kind, level):
    n = len(x)
    if kind == "white":
        noise = rng.standard_normal(n)
        noise *= np.linalg.norm(x) / np.linalg.norm(noise) / 10 ** (level / 20)
        return x + noise
    if kind == "babble":
        other = speech_like(rng, fs, n / fs)[:n]
        other *= np.linalg.norm(x) / np.linalg.norm(other) / 10 ** (level / 20)
        return x + other
    if kind == "reverb":
        tail = int(level * fs)
        h = rng.standard_normal(tail) * np.exp(-6.9 * np.arange(tail) / tail)
        h[0] = 1.0
        return np.convolve(x, h)[:n] / np.sum(np.abs(h)) * 4
    if kind == "lowpass":
        r = np.exp(-2 * np.pi * level / fs)
        return lfilter([1 - r], [1, -r], lfilter([1 - r], [1, -r], x)) * 1.5
    if kind == "clip":
        return np.clip(x * level, -0.3, 0.3)
    if kind == "noise":
        return 0.2 * rng.standard_normal(n)
    raise ValueError(kind)


CASES = [
    ("white", 20), ("white", 10), ("white", 5), ("white", 0), ("white", -5),
    ("babble", 10), ("babble", 3), ("babble", 0), ("reverb", 0.3),
    ("reverb", 0.8), ("lowpass", 1000), ("lowpass", 400), ("clip", 3),
    ("clip", 10), ("noise", 0), ("white", 15), ("babble", -3),
    ("reverb", 0.5), ("white", -10), ("lowpass", 2500),
]
RATES = [24000] * 14 + [16000] * 3 + [10000] * 3


def to_int16(x):
    return np.round(np.clip(x, -1, 32767 / 32768) * 32768).astype(np.int16)


def main():
    os.makedirs(OUT, exist_ok=True)
    rng = np.random.default_rng(20260101)
    rows = []
    for i, ((kind, level), fs) in enumerate(zip(CASES, RATES)):
        x = speech_like(rng, fs, 2.5)
        y = degrade(rng, x, fs, kind, level)
        y *= 0.9 / max(0.9, np.max(np.abs(y)))
        xi, yi = to_int16(x), to_int16(y)
        name = "pair%02d" % i
        wavfile.write(os.path.join(OUT, name + "_ref.wav"), fs, xi)
        wavfile.write(os.path.join(OUT, name + "_deg.wav"), fs, yi)
        xf, yf = xi / 32768.0, yi / 32768.0
        s = stoi(xf, yf, fs, extended=False)
        e = stoi(xf, yf, fs, extended=True)
        rows.append("%s\t%d\t%s\t%.10f\t%.10f" % (name, fs, kind, s, e))
    with open(os.path.join(OUT, "oracle.tsv"), "w") as f:
        f.write("# name\trate\tdegradation\tstoi\testoi\n")
        f.write("\n".join(rows) + "\n")


if __name__ == "__main__":
    main()
