#!/usr/bin/env python3
"""Convert a flat gate-level Verilog netlist (and/nand/or/nor/not/buf/xor/xnor
primitives) into combinational ASCII AIGER.

usage: verilog_to_aag.py netlist.v out.aag
"""
import re
import sys


def statements(text):
    text = re.sub(r"//.*", "", text)
    text = re.sub(r"/\*.*?\*/", "", text, flags=re.S)
    for s in text.split(";"):
        s = " ".join(s.split())
        if s:
            yield s


def names(s):
    return [n.strip() for n in s.split(",") if n.strip()]


def parse(text):
    inputs, outputs, gates = [], [], {}
    for s in statements(text):
        head = s.split(" ", 1)[0]
        if head in ("module", "wire", "endmodule"):
            continue
        if head == "input":
            inputs += names(s[len("input"):])
        elif head == "output":
            outputs += names(s[len("output"):])
        else:
            m = re.match(r"(\w+)\s+(?:\w+\s*)?\((.*)\)$", s)
            if not m:
                raise ValueError("cannot parse: " + s)
            pins = names(m.group(2))
            gates[pins[0]] = (m.group(1), pins[1:])
    return inputs, outputs, gates


class Aig:
    def __init__(self, n_inputs):
        self.next_var = n_inputs + 1
        self.ands = []
        self.cache = {}

    def and2(self, a, b):
        if a > b:
            a, b = b, a
        if a == 0:
            return 0
        if a == 1:
            return b
        if a == b:
            return a
        if a ^ 1 == b:
            return 0
        key = (a, b)
        if key not in self.cache:
            lit = 2 * self.next_var
            self.next_var += 1
            self.ands.append((lit, b, a))
            self.cache[key] = lit
        return self.cache[key]

    def and_n(self, lits):
        acc = lits[0]
        for x in lits[1:]:
            acc = self.and2(acc, x)
        return acc

    def xor2(self, a, b):
        return self.and2(self.and2(a, b ^ 1) ^ 1, self.and2(a ^ 1, b) ^ 1) ^ 1


def convert(text):
    inputs, outputs, gates = parse(text)
    aig = Aig(len(inputs))
    lit = {n: 2 * (i + 1) for i, n in enumerate(inputs)}
    lit["1'b0"], lit["1'b1"] = 0, 1

    def build(net):
        stack = [net]
        while stack:
            n = stack[-1]
            if n in lit:
                stack.pop()
                continue
            if n not in gates:
                raise ValueError("undriven net " + n)
            _, ins = gates[n]
            missing = [i for i in ins if i not in lit]
            if missing:
                stack.extend(missing)
                continue
            stack.pop()
            kind, xs = gates[n][0], [lit[i] for i in ins]
            if kind in ("and", "nand"):
                v = aig.and_n(xs)
            elif kind in ("or", "nor"):
                v = aig.and_n([x ^ 1 for x in xs]) ^ 1
            elif kind in ("not", "buf"):
                v = xs[0]
            elif kind in ("xor", "xnor"):
                v = xs[0]
                for x in xs[1:]:
                    v = aig.xor2(v, x)
            else:
                raise ValueError("unsupported gate " + kind)
            if kind in ("nand", "nor", "not", "xnor"):
                v ^= 1
            lit[n] = v
        return lit[net]

    out_lits = [build(o) for o in outputs]
    lines = ["aag %d %d 0 %d %d" % (aig.next_var - 1, len(inputs), len(outputs), len(aig.ands))]
    lines += [str(2 * (i + 1)) for i in range(len(inputs))]
    lines += [str(o) for o in out_lits]
    lines += ["%d %d %d" % a for a in aig.ands]
    lines += ["i%d %s" % (i, n) for i, n in enumerate(inputs)]
    lines += ["o%d %s" % (i, n) for i, n in enumerate(outputs)]
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    with open(sys.argv[1]) as f:
        text = f.read()
    with open(sys.argv[2], "w") as f:
        f.write(convert(text))
