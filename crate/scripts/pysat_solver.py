#!/usr/bin/env python3
"""DIMACS CNF solver front end with SAT-competition output.

Usage: pysat_solver.py FILE.cnf [--solver NAME]

Prints `s SATISFIABLE` with `v` model lines, `s UNSATISFIABLE`, or
`s UNKNOWN`, and exits with 10, 20 or 0 respectively.
"""
import argparse
import sys

from pysat.formula import CNF
from pysat.solvers import Solver


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("cnf")
    ap.add_argument("--solver", default="cadical153")
    args = ap.parse_args()

    formula = CNF(from_file=args.cnf)
    with Solver(name=args.solver, bootstrap_with=formula.clauses) as s:
        result = s.solve()
        if result is True:
            print("s SATISFIABLE")
            model = s.get_model()
            for i in range(0, len(model), 20):
                print("v " + " ".join(map(str, model[i:i + 20])))
            print("v 0")
            return 10
        if result is False:
            print("s UNSATISFIABLE")
            return 20
    print("s UNKNOWN")
    return 0


if __name__ == "__main__":
    sys.exit(main())
