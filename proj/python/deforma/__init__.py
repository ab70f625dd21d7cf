"""Python access to the deforma library. Structures are plain dicts in the
JSON encodings read by the command line tool."""

import json

from . import _deforma
from ._deforma import Error, InputError

__all__ = ["Error", "InputError", "check_linfty", "check_dgla", "cone", "certify_quasi_abelian",
           "toric_cohomology", "btt", "theorem52", "builtin_cover"]


def _call(fn, *args):
    return json.loads(fn(*(json.dumps(a) if isinstance(a, dict) else a for a in args)))


def builtin_cover(name):
    """One of "P1", "P2", "A1", "torus<d>"."""
    return {"builtin": name}


def check_linfty(linfty, cutoff=4):
    return _call(_deforma.check_linfty, linfty, cutoff)


def check_dgla(dgla):
    return _call(_deforma.check_dgla, dgla)


def cone(morphism, cutoff=4):
    """Mapping-cone L-infinity structure of a DGLA morphism."""
    return _call(_deforma.cone, morphism, cutoff)


def certify_quasi_abelian(linfty, cutoff=4):
    return _call(_deforma.certify_quasi_abelian, linfty, cutoff)


def toric_cohomology(cover, sheaf="theta", p=0, box=2):
    """Cech cohomology dims of vector fields ("theta") or p-forms ("forms", p < 0 for de Rham)."""
    out = _call(_deforma.toric_cohomology, cover, sheaf, p, box)
    for key in ("dims", "next"):
        out[key] = {int(k): v for k, v in out[key].items()}
    return out


def btt(cover, box=2):
    return _call(_deforma.btt, cover, box)


def theorem52(obj, ring="k[t]/(t^4)", samples=40, seed=1):
    return _call(_deforma.theorem52, obj, ring, samples, seed)
