"""Binary field files and CSV emitters.

Field format: a 64-byte ASCII header "EULER2D1 n=... c=... t=..." padded
with spaces, followed by raw little-endian float64 data, row-major,
component-major for vectors.  Round-trips are bit-exact.
"""

import csv

import numpy as np

from .errors import ConfigError

MAGIC = "EULER2D1"
HEADER_LEN = 64


def write_field(path, values, time):
    values = np.asarray(values, dtype="<f8")
    if values.ndim == 2:
        comps, n = 1, values.shape[0]
    elif values.ndim == 3:
        comps, n = values.shape[0], values.shape[1]
    else:
        raise ConfigError(f"unsupported field rank {values.ndim}")
    header = f"{MAGIC} n={n:d} c={comps:d} t={time:+.17e}"
    header = header.ljust(HEADER_LEN - 1) + "\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(values.tobytes())


def read_field(path):
    """Return (values, time); vectors come back with shape (c, n, n)."""
    with open(path, "rb") as fh:
        header = fh.read(HEADER_LEN).decode("ascii")
        data = fh.read()
    parts = header.split()
    if not parts or parts[0] != MAGIC:
        raise ConfigError(f"{path}: not a field file")
    fields = dict(p.split("=", 1) for p in parts[1:])
    n = int(fields["n"])
    comps = int(fields["c"])
    time = float(fields["t"])
    values = np.frombuffer(data, dtype="<f8").copy()
    shape = (n, n) if comps == 1 else (comps, n, n)
    return values.reshape(shape), time


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def read_csv(path):
    """Return (header, rows) with rows as lists of floats where possible."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = []
        for row in reader:
            parsed = []
            for cell in row:
                try:
                    parsed.append(float(cell))
                except ValueError:
                    parsed.append(cell)
            rows.append(parsed)
    return header, rows


def write_config(path, mapping):
    with open(path, "w") as fh:
        for key, value in mapping.items():
            fh.write(f"{key}={value}\n")


def read_config(path):
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line and "=" in line:
                key, value = line.split("=", 1)
                out[key] = value
    return out
