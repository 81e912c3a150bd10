"""CSV ingestion and report serialization.

Input formats (UTF-8, header required, duplicate headers rejected):

* long format:   sample_id,species_id,count[,<group columns...>]
                 (`count` optional, defaults to 1)
* histogram:     species_id,count
* spectrum:      r,f_r  with r strictly increasing

Every writer emits a metadata header (CSV comment lines or JSON fields)
recording the tool version, the command line, and the seed, so published
runs can be reproduced byte for byte.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict
from typing import Iterable, Mapping, Sequence, TextIO

from .analysis import GroupReportRow
from .errors import SchemaError
from .resampling import AccumulationPoint, BootstrapResult
from .stats import RegressionResult, TrendFit
from .tally import ABUNDANCE, FrequencySpectrum, ObservationRecord
from .version import __version__

LONG_COLUMNS = ("sample_id", "species_id", "count")


def _data_lines(f: TextIO) -> Iterable[str]:
    """Skip `#` comment lines so our own metadata headers round-trip."""
    for line in f:
        if line.lstrip().startswith("#"):
            continue
        yield line


def _read_header(reader: Iterable[list[str]], what: str) -> list[str]:
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError(f"{what}: missing header row") from None
    names = [h.strip() for h in header]
    dupes = {n for n in names if names.count(n) > 1}
    if dupes:
        raise SchemaError(f"{what}: duplicate header column(s) {sorted(dupes)}")
    return names


def _parse_int(value: str, row: int, column: str) -> int:
    try:
        return int(value.strip())
    except ValueError:
        raise SchemaError(
            f"row {row}: non-integer {column} {value.strip()!r}"
        ) from None


def read_records(f: TextIO) -> list[ObservationRecord]:
    """Parse long-format CSV into observation records. Extra columns are
    kept as record attributes for grouping."""
    reader = csv.reader(_data_lines(f))
    header = _read_header(reader, "long-format CSV")
    if "species_id" not in header:
        raise SchemaError("long-format CSV: missing species_id column")
    extra = [h for h in header if h not in LONG_COLUMNS]
    records: list[ObservationRecord] = []
    for row_num, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise SchemaError(
                f"row {row_num}: expected {len(header)} fields, got {len(row)}"
            )
        cells = dict(zip(header, row))
        count = 1
        if "count" in cells and cells["count"].strip() != "":
            count = _parse_int(cells["count"], row_num, "count")
        if count < 0:
            raise SchemaError(f"row {row_num}: negative count {count}")
        records.append(
            ObservationRecord(
                sample_id=cells.get("sample_id", "").strip(),
                species_id=cells["species_id"].strip(),
                count=count,
                attrs={k: cells[k].strip() for k in extra},
            )
        )
    return records


def read_histogram(f: TextIO) -> list[ObservationRecord]:
    """Parse a species_id,count histogram CSV into abundance records."""
    reader = csv.reader(_data_lines(f))
    header = _read_header(reader, "histogram CSV")
    if header[:2] != ["species_id", "count"]:
        raise SchemaError(
            "histogram CSV: header must be species_id,count, got "
            + ",".join(header)
        )
    records = []
    for row_num, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise SchemaError(f"row {row_num}: expected 2 fields, got {len(row)}")
        count = _parse_int(row[1], row_num, "count")
        if count < 0:
            raise SchemaError(f"row {row_num}: negative count {count}")
        records.append(
            ObservationRecord(
                sample_id="_default",
                species_id=row[0].strip(),
                count=count,
            )
        )
    return records


def read_spectrum(f: TextIO, mode: str, n_or_m: int | None = None) -> FrequencySpectrum:
    """Parse an r,f_r spectrum CSV; r must be strictly increasing."""
    reader = csv.reader(_data_lines(f))
    header = _read_header(reader, "spectrum CSV")
    if header[:2] != ["r", "f_r"]:
        raise SchemaError(
            "spectrum CSV: header must be r,f_r, got " + ",".join(header)
        )
    freqs: dict[int, int] = {}
    last_r = 0
    for row_num, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise SchemaError(f"row {row_num}: expected 2 fields, got {len(row)}")
        r = _parse_int(row[0], row_num, "r")
        f_r = _parse_int(row[1], row_num, "f_r")
        if r <= last_r:
            raise SchemaError(f"row {row_num}: r values must be strictly increasing")
        if r < 1 or f_r < 0:
            raise SchemaError(f"row {row_num}: r must be >= 1 and f_r >= 0")
        last_r = r
        freqs[r] = f_r
    if not freqs:
        raise SchemaError("spectrum CSV: no data rows")
    if n_or_m is None:
        if mode == ABUNDANCE:
            n_or_m = sum(r * f_r for r, f_r in freqs.items())
        else:
            n_or_m = max(freqs)
    return FrequencySpectrum(freqs, mode, n_or_m)


# ---------------------------------------------------------------------------
# Writers


def metadata(
    command: str,
    seed: int | None = None,
    estimator: str | None = None,
    **extra: str,
) -> dict[str, str]:
    meta = {"tool": f"silentspecies {__version__}", "command": command}
    if seed is not None:
        meta["seed"] = str(seed)
    if estimator is not None:
        meta["estimator"] = estimator
    meta.update(extra)
    return meta


def _write_meta_comments(f: TextIO, meta: Mapping[str, str]) -> None:
    for key, value in meta.items():
        f.write(f"# {key}: {value}\n")


def _fmt(value: float, places: int = 3) -> str:
    return f"{value:.{places}f}"


def write_records_csv(
    records: Iterable[ObservationRecord], f: TextIO, meta: Mapping[str, str]
) -> None:
    _write_meta_comments(f, meta)
    f.write("sample_id,species_id,count\n")
    for rec in records:
        f.write(f"{rec.sample_id},{rec.species_id},{rec.count}\n")


def write_spectrum_csv(
    spec: FrequencySpectrum, f: TextIO, meta: Mapping[str, str]
) -> None:
    _write_meta_comments(f, meta)
    f.write("r,f_r\n")
    for r in sorted(spec.freqs):
        f.write(f"{r},{spec.freqs[r]}\n")


_REPORT_FIELDS = (
    "group_key",
    "types",
    "tokens_or_samples",
    "ttr_or_str",
    "f1",
    "f2",
    "coverage",
    "s_hat",
    "estimator_name",
    "fallback",
)


def write_report_csv(
    rows: Sequence[GroupReportRow], f: TextIO, meta: Mapping[str, str]
) -> None:
    _write_meta_comments(f, meta)
    f.write(",".join(_REPORT_FIELDS) + "\n")
    for row in rows:
        f.write(
            ",".join(
                [
                    row.group_key,
                    str(row.types),
                    str(row.tokens_or_samples),
                    _fmt(row.ttr_or_str),
                    str(row.f1),
                    str(row.f2),
                    _fmt(row.coverage),
                    _fmt(row.s_hat),
                    row.estimator_name,
                    "1" if row.used_fallback else "0",
                ]
            )
            + "\n"
        )


def write_report_markdown(
    rows: Sequence[GroupReportRow],
    f: TextIO,
    meta: Mapping[str, str],
    group_label: str = "Group",
    mode: str = ABUNDANCE,
) -> None:
    """Markdown table in the layout of the published tables:
    Group/Types/Tokens/TTR/f1/f2/Coverage (Samples/STR for incidence)."""
    for key, value in meta.items():
        f.write(f"<!-- {key}: {value} -->\n")
    if mode == ABUNDANCE:
        unit, ratio = "Tokens", "TTR"
    else:
        unit, ratio = "Samples", "STR"
    headers = [group_label, "Types", unit, ratio, "f1", "f2", "Coverage"]
    f.write("| " + " | ".join(headers) + " |\n")
    f.write("|" + "|".join("---" for _ in headers) + "|\n")
    for row in rows:
        f.write(
            "| "
            + " | ".join(
                [
                    row.group_key,
                    str(row.types),
                    str(row.tokens_or_samples),
                    _fmt(row.ttr_or_str),
                    str(row.f1),
                    str(row.f2),
                    _fmt(row.coverage),
                ]
            )
            + " |\n"
        )


def write_report_json(
    rows: Sequence[GroupReportRow], f: TextIO, meta: Mapping[str, str]
) -> None:
    payload = {
        "meta": dict(meta),
        "rows": [
            {**asdict(row), "fallback": row.used_fallback} for row in rows
        ],
    }
    json.dump(payload, f, indent=2, sort_keys=True)
    f.write("\n")


def write_accumulation_csv(
    points: Sequence[AccumulationPoint], f: TextIO, meta: Mapping[str, str]
) -> None:
    _write_meta_comments(f, meta)
    f.write("k,replicates,mean_s_obs,mean_s_hat,sd_s_hat\n")
    for p in points:
        f.write(
            f"{p.k},{p.replicates},{p.mean_s_obs!r},{p.mean_s_hat!r},"
            f"{p.sd_s_hat!r}\n"
        )


def write_bootstrap_csv(
    results: Mapping[str, BootstrapResult], f: TextIO, meta: Mapping[str, str]
) -> None:
    _write_meta_comments(f, meta)
    f.write("metric,point,lower,upper,level,replicates,seed\n")
    for metric in sorted(results):
        r = results[metric]
        f.write(
            f"{metric},{r.point!r},{r.lower!r},{r.upper!r},{r.level!r},"
            f"{r.replicates},{r.seed}\n"
        )


def write_correlation_csv(
    result: RegressionResult,
    x_name: str,
    y_name: str,
    f: TextIO,
    meta: Mapping[str, str],
) -> None:
    _write_meta_comments(f, meta)
    f.write("x_name,y_name,n,slope,intercept,r,p_value\n")
    f.write(
        f"{x_name},{y_name},{result.n_points},{result.slope!r},"
        f"{result.intercept!r},{result.r!r},{result.p_value!r}\n"
    )


def write_trend_csv(fit: TrendFit, f: TextIO, meta: Mapping[str, str]) -> None:
    """Plot-data grid: x,fit,lower,upper (band columns empty when no band
    was computed)."""
    _write_meta_comments(f, meta)
    f.write("x,fit,lower,upper\n")
    if fit.band is None:
        return
    for x, lower, upper in fit.band:
        fitted = float(fit.predict([x])[0])
        f.write(f"{x!r},{fitted!r},{lower!r},{upper!r}\n")
