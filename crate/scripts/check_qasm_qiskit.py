#!/usr/bin/env python3
"""Load qsynth QASM files in Qiskit and compare their output distribution.

Usage: check_qasm_qiskit.py CIRCUIT.qasm [PMF_FILE] [CIRCUIT.qasm [PMF_FILE] ...]

Each circuit is parsed with qiskit.qasm2, final measurements are removed and
the statevector probabilities are compared bin by bin with the PMF table that
follows it (one value per line, `#` comments), if given. Qiskit orders basis
states with qubit 0 as the least significant bit, as qsynth does.
"""

import sys

from qiskit import qasm2
from qiskit.quantum_info import Statevector

TOLERANCE = 1e-10


def read_pmf(path):
    values = []
    with open(path) as f:
        for line in f:
            line = line.split("#", 1)[0].strip()
            values.extend(float(v) for v in line.split(",") if v.strip())
    total = sum(values)
    return [v / total for v in values]


def check(qasm_path, pmf_path):
    circuit = qasm2.load(qasm_path, custom_instructions=qasm2.LEGACY_CUSTOM_INSTRUCTIONS)
    ops = dict(circuit.count_ops())
    measures = ops.pop("measure", 0)
    gates = sum(ops.values())
    probs = Statevector(circuit.remove_final_measurements(inplace=False)).probabilities()
    line = f"{qasm_path}: qubits={circuit.num_qubits} gates={gates} measures={measures}"
    if pmf_path is None:
        print(line)
        return True
    expected = read_pmf(pmf_path)
    if len(expected) != len(probs):
        print(f"{line} FAIL: {len(probs)} states vs {len(expected)} bins")
        return False
    worst = max(abs(p - q) for p, q in zip(probs, expected))
    ok = worst < TOLERANCE
    print(f"{line} max_abs_error={worst:.3e} {'ok' if ok else 'FAIL'}")
    return ok


def main(args):
    if not args:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    pairs = []
    while args:
        qasm_path = args.pop(0)
        pmf_path = args.pop(0) if args and not args[0].endswith(".qasm") else None
        pairs.append((qasm_path, pmf_path))
    results = [check(q, p) for q, p in pairs]
    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
