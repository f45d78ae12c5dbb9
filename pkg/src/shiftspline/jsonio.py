"""JSON output with floats written at 17 significant digits."""
import json
import math
from fractions import Fraction

import numpy as np


def _float(x):
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    text = format(x, ".17g")
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1)) if indent else ""
    end = " " * (indent * level) if indent else ""
    nl = "\n" if indent else ""
    sep = "," + nl if indent else ", "
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, Fraction):
        return _encode(str(obj), indent, level)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_encode(str(k), indent, level)}: {_encode(v, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{" + nl + sep.join(items) + nl + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[" + nl + sep.join(items) + nl + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2):
    return _encode(obj, indent, 0)
