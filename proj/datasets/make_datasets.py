#!/usr/bin/env python3
"""Regenerate the bundled synthetic datasets.

Writes three families of six-blob constellation point clouds (OFF), the
family labels CSV, a builder config tuned for this corpus, and three
same-topology keyframe meshes (OBJ) for the morph demo. Deterministic:
rerunning produces identical files.
"""

import math
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))

SITES = {
    # collinear with widening gaps
    "ladder": [(0.0, 0, 0), (0.24, 0, 0), (0.56, 0, 0), (0.96, 0, 0), (1.44, 0, 0), (2.0, 0, 0)],
    # an L with a lopsided tail
    "hook": [(0.0, 0, 0), (0.5, 0, 0), (1.0, 0, 0), (1.5, 0, 0), (0.0, 0.5, 0), (0.0, 1.1, 0)],
    # irregular loop climbing out of the plane
    "spiral": [(0.0, 0, 0), (0.5, 0.1, 0), (0.9, 0.45, 0), (0.6, 1.0, 0), (-0.2, 0.65, 0),
               (0.4, 0.45, 0.35)],
}

PER_FAMILY = 3
POINTS = 72


def constellation(family, rng):
    sites = [tuple(c + 0.03 * rng.gauss(0, 1) for c in site) for site in SITES[family]]
    points = []
    for i in range(POINTS):
        site = sites[i % 6]
        points.append(tuple(c + 0.05 * rng.gauss(0, 1) for c in site))
    return points


def write_off(path, points):
    with open(path, "w") as out:
        out.write("OFF\n%d 0 0\n" % len(points))
        for p in points:
            out.write("%.17g %.17g %.17g\n" % p)


def wave_vertices(phase, amplitude):
    verts = []
    for r in range(5):
        for c in range(5):
            x, y = c / 4.0, r / 4.0
            z = amplitude * math.sin(math.pi * (x + phase)) * math.sin(math.pi * y)
            verts.append((x, y, z))
    return verts


def wave_faces():
    faces = []
    for r in range(4):
        for c in range(4):
            a = r * 5 + c
            faces.append((a, a + 1, a + 6))
            faces.append((a, a + 6, a + 5))
    return faces


def write_obj(path, verts, faces):
    with open(path, "w") as out:
        for v in verts:
            out.write("v %.17g %.17g %.17g\n" % v)
        for f in faces:
            out.write("f %d %d %d\n" % (f[0] + 1, f[1] + 1, f[2] + 1))


def main():
    shapes_dir = os.path.join(HERE, "shapes")
    keyframes_dir = os.path.join(HERE, "keyframes")
    os.makedirs(shapes_dir, exist_ok=True)
    os.makedirs(keyframes_dir, exist_ok=True)

    labels = []
    for f, family in enumerate(sorted(SITES)):
        for i in range(PER_FAMILY):
            rng = random.Random(1000 * f + i)
            shape_id = "%s%d" % (family, i)
            write_off(os.path.join(shapes_dir, shape_id + ".off"), constellation(family, rng))
            labels.append((shape_id, family))
    with open(os.path.join(HERE, "labels.csv"), "w") as out:
        out.write("id,label\n")
        for shape_id, label in labels:
            out.write("%s,%s\n" % (shape_id, label))

    # sigma: 0.3 x the median cluster distance of this corpus, as printed by
    # `matpath build-graph --distance-stats`; see the top-level README.
    with open(os.path.join(HERE, "config.json"), "w") as out:
        out.write(
            '{\n'
            '  "n": 6,\n'
            '  "p": 20,\n'
            '  "sigma": 0.3647,\n'
            '  "sinkhornTol": 1e-08,\n'
            '  "sinkhornMaxIter": 200000,\n'
            '  "kmeansSeed": 0,\n'
            '  "kmeansRestarts": 10\n'
            '}\n'
        )

    faces = wave_faces()
    for i, (phase, amplitude) in enumerate([(0.0, 0.15), (0.25, 0.35), (0.5, 0.2)]):
        write_obj(os.path.join(keyframes_dir, "wave%d.obj" % i), wave_vertices(phase, amplitude),
                  faces)


if __name__ == "__main__":
    main()
