import pandas as pd


def _flatten(value):
    if isinstance(value, (list, tuple)):
        return ", ".join(str(v) for v in value)
    if isinstance(value, dict):
        return "; ".join(f"{k}={_flatten(v)}" for k, v in value.items())
    return value


def render_text(report: dict) -> str:
    """Render a report dict as text: scalar fields first, then one table per list of records."""
    pd.set_option("display.max_columns", None)
    pd.set_option("display.width", None)
    pd.set_option("display.max_colwidth", 60)

    scalars = {k: _flatten(v) for k, v in report.items()
               if not (isinstance(v, list) and v and isinstance(v[0], dict))}
    blocks = [pd.DataFrame([scalars]).T.rename(columns={0: "value"}).to_string()]
    for key, value in report.items():
        if isinstance(value, list) and value and isinstance(value[0], dict):
            frame = pd.DataFrame([{k: _flatten(v) for k, v in row.items()} for row in value])
            blocks.append(f"[{key}]\n{frame.to_string(index=False)}")
    return "\n\n".join(blocks)
