"""JSON input schemas and report rendering."""

import json
from fractions import Fraction

from .cones import PolyCone
from .errors import SchemaError
from .exact.field import FieldElem
from .exact.matrix import ExactMatrix


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from exc


def load_matrix(path):
    data = load_json(path)
    if isinstance(data, dict):
        data = data.get("matrix")
    return ExactMatrix.from_json(data)


def load_cone(data, dim):
    if data is None:
        return PolyCone.orthant(dim)
    if data == "orthant":
        return PolyCone.orthant(dim)
    if not isinstance(data, dict):
        raise SchemaError("cone must be an object {dim, rays} or \"orthant\"")
    return PolyCone.from_json(data)


def load_group(path):
    """``{"dim": d, "generators": {"g1": [[...]], ...}, "cone": {...}}``."""
    data = load_json(path)
    if not isinstance(data, dict) or not isinstance(data.get("generators"), dict):
        raise SchemaError("group must be an object with a 'generators' map")
    gens = {str(k): ExactMatrix.from_json(v) for k, v in data["generators"].items()}
    if not gens:
        raise SchemaError("group has no generators")
    dims = {g.dim for g in gens.values()}
    if len(dims) != 1:
        raise SchemaError("generators have different sizes")
    dim = dims.pop()
    if "dim" in data and int(data["dim"]) != dim:
        raise SchemaError(f"declared dim {data['dim']} differs from generator size {dim}")
    return dim, gens, data.get("cone"), data


def jsonable(x):
    """Recursively convert exact scalars and containers into JSON data."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, FieldElem):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return jsonable(x.to_json())
    return str(x)


def render_json(report):
    return json.dumps(jsonable(report), indent=2, sort_keys=True) + "\n"


def _flatten(prefix, x, out):
    if isinstance(x, dict):
        for k in sorted(x):
            _flatten(f"{prefix}.{k}" if prefix else str(k), x[k], out)
    elif isinstance(x, list) and any(isinstance(v, (dict, list)) for v in x):
        for i, v in enumerate(x):
            _flatten(f"{prefix}.{i}", v, out)
    elif isinstance(x, list):
        out.append((prefix, ",".join(json.dumps(v) if not isinstance(v, str) else v for v in x)))
    else:
        out.append((prefix, x if isinstance(x, str) else json.dumps(x)))


def render_tsv(report):
    rows = []
    _flatten("", jsonable(report), rows)
    return "".join(f"{k}\t{v}\n" for k, v in rows)
