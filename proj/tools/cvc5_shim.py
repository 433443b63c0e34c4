#!/usr/bin/env python3
"""Command-line stand-in for cvc5 built on its Python bindings.

Accepts the subset of cvc5 options the runner passes
(--lang=smt2 --tlimit=MS --seed=N FILE) and prints each check-sat result.
"""

import argparse
import sys

import cvc5


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--lang", default="smt2")
    ap.add_argument("--tlimit", type=int, default=0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("file")
    args = ap.parse_args()

    solver = cvc5.Solver()
    solver.setOption("produce-models", "false")
    if args.tlimit > 0:
        solver.setOption("tlimit", str(args.tlimit))
    solver.setOption("seed", str(args.seed))
    symbols = cvc5.SymbolManager(solver.getTermManager())
    parser = cvc5.InputParser(solver, symbols)
    parser.setFileInput(cvc5.InputLanguage.SMT_LIB_2_6, args.file)
    while True:
        cmd = parser.nextCommand()
        if cmd.isNull():
            break
        out = cmd.invoke(solver, symbols)
        if out:
            sys.stdout.write(out if out.endswith("\n") else out + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
