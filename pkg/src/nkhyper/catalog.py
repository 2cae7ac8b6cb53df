"""Explicit hypersurfaces used as positive controls.

On S3 x S3 the three immersions of S3 x S2, with S2 the unit imaginary
quaternions; on S6 the geodesic hyperspheres around a fixed pole, the
equator being the totally geodesic one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from . import quat
from .hypersurface import Immersion
from .quat import DomainError

S3_BOX = 1.0
S2_COLAT = (0.3, np.pi - 0.3)
S2_LONG = (-np.pi, np.pi)
S5_BOX = 1.0
POLE = 6  # e_7


def _s3(s):
    return quat.exp_im(s[:, :3])


def _s2(s):
    th, ph = s[:, 3], s[:, 4]
    return np.column_stack([np.zeros_like(th), np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])


def _s3s2_box():
    return (-S3_BOX,) * 3 + (S2_COLAT[0], S2_LONG[0]), (S3_BOX,) * 3 + (S2_COLAT[1], S2_LONG[1])


def _f1(s):
    return np.concatenate([_s3(s), _s2(s)], axis=1)


def _f2(s):
    return np.concatenate([_s2(s), _s3(s)], axis=1)


def _f3(s):
    xb = quat.conj(_s3(s))
    return np.concatenate([xb, quat.mul(_s2(s), xb)], axis=1)


def f1() -> Immersion:
    lo, hi = _s3s2_box()
    return Immersion("s3s3", _f1, lo, hi, "f1")


def f2() -> Immersion:
    lo, hi = _s3s2_box()
    return Immersion("s3s3", _f2, lo, hi, "f2")


def f3() -> Immersion:
    lo, hi = _s3s2_box()
    return Immersion("s3s3", _f3, lo, hi, "f3")


def geodesic_sphere_s6(r: float) -> Immersion:
    """Distance sphere of radius r about e_7, parametrised by the exp chart of S5 at e_1."""
    r = float(r)
    if not 0.0 < r < np.pi:
        raise DomainError("radius must lie in (0, pi)")

    def fmap(s):
        rad = np.linalg.norm(s, axis=1)
        gam = np.zeros((s.shape[0], 7))
        gam[:, 0] = np.cos(rad)
        gam[:, 1:6] = quat._sinc(rad)[:, None] * s
        out = np.sin(r) * gam
        out[:, POLE] += np.cos(r)
        return out

    return Immersion("s6", fmap, (-S5_BOX,) * 5, (S5_BOX,) * 5, f"sphere:{r!r}")


def equator_s5() -> Immersion:
    imm = geodesic_sphere_s6(np.pi / 2)
    return Immersion(imm.ambient, imm.map, imm.lower, imm.upper, "equator")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    immersion: Immersion
    tags: tuple


def entry(name: str) -> CatalogEntry:
    """Look up ``f1 | f2 | f3 | equator | sphere:<r>``."""
    if name in ("f1", "f2", "f3"):
        imm = {"f1": f1, "f2": f2, "f3": f3}[name]()
        return CatalogEntry(name, imm, ("commuting", "codazzi", "hopf_lemma"))
    if name == "equator":
        return CatalogEntry(name, equator_s5(), ("totally_geodesic", "anticommuting", "codazzi", "hopf_lemma"))
    m = re.fullmatch(r"sphere:(.+)", name)
    if m:
        try:
            r = float(m.group(1))
        except ValueError:
            raise DomainError(f"bad radius in {name!r}") from None
        return CatalogEntry(name, geodesic_sphere_s6(r), ("umbilical", "commuting", "codazzi", "hopf_lemma"))
    raise DomainError(f"unknown catalog entry {name!r}")


NAMES = ("f1", "f2", "f3", "equator", "sphere:<r>")
