"""Rendering of result envelopes as JSON, TSV or plain text tables."""
import json
from typing import Any, Dict, List

import pandas as pd

FORMATS = ("json", "tsv", "text")


def payload_table(payload: Dict[str, Any]) -> pd.DataFrame:
    """
    Table principale d'un résultat.

    Si le payload contient une liste ``rows`` de dictionnaires, c'est elle qui
    est rendue ; sinon les champs scalaires sont rendus en deux colonnes
    ``field`` / ``value``.
    """
    rows = payload.get("rows") if isinstance(payload, dict) else None
    if isinstance(rows, list) and all(isinstance(r, dict) for r in rows):
        df = pd.DataFrame(rows)
        # lists and dicts inside cells are shown as JSON
        for column in df.columns:
            if df[column].map(lambda v: isinstance(v, (list, dict))).any():
                df[column] = df[column].map(lambda v: json.dumps(v, sort_keys=True)
                                            if isinstance(v, (list, dict)) else v)
        return df
    fields = [(k, v) for k, v in (payload or {}).items() if not isinstance(v, (list, dict))]
    return pd.DataFrame(fields, columns=["field", "value"])


def _header_lines(envelope: Dict[str, Any]) -> List[str]:
    request = envelope.get("request", {})
    lines = [f"# {request.get('subcommand', '?')} "
             + " ".join(f"{k}={v}" for k, v in sorted(request.items()) if k != "subcommand" and v is not None)]
    for warning in envelope.get("warnings", []):
        lines.append(f"# warning: {warning}")
    if "error" in envelope:
        lines.append(f"# error [{envelope['error']['code']}]: {envelope['error']['message']}")
    return lines


def render(envelope: Dict[str, Any], fmt: str = "json") -> str:
    """Renders a result envelope.

    Args:
        envelope (dict): request, payload, warnings, timing and cache fields.
        fmt (str): json, tsv or text.

    Returns:
        str: Text ready to be printed.
    """
    if fmt == "json":
        return json.dumps(envelope, indent=2, ensure_ascii=False)

    lines = _header_lines(envelope)
    payload = envelope.get("payload")
    if payload is None:
        return "\n".join(lines)
    df = payload_table(payload)
    if fmt == "tsv":
        lines.append(df.to_csv(sep="\t", index=False).rstrip("\n"))
    elif fmt == "text":
        lines.append(df.to_string(index=False) if len(df) else "(empty)")
        extra = {k: v for k, v in payload.items() if k != "rows" and isinstance(v, (list, dict))}
        for k, v in extra.items():
            lines.append(f"{k}: {json.dumps(v, sort_keys=True, ensure_ascii=False)}")
    else:
        raise ValueError(f"Unknown format {fmt!r}")
    return "\n".join(lines)
