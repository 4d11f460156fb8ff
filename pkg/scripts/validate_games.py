"""Parse both game descriptions and print per-sentence status plus timed-state warnings."""

from importlib import resources

from sentsimp.cnl import ParseDiagnostic, parse_sentence, render_rule, timed_pairs, timed_state_check


def report(name: str):
    text = (resources.files("sentsimp") / "data" / name).read_text(encoding="utf-8")
    rules = []
    print(f"== {name}")
    for i, line in enumerate(filter(None, map(str.strip, text.splitlines())), start=1):
        r = parse_sentence(line)
        if isinstance(r, ParseDiagnostic):
            print(f"{i:2d} {r.code.value:18s} {line}")
        else:
            rules.append(r)
            print(f"{i:2d} {'ok':18s} {render_rule(r)}")
    for p in timed_pairs(rules):
        print(f"   timed pair: guard {p.guard} {p.guard_duration:g}s < trigger {p.trigger} {p.trigger_duration:g}s: {p.ordered}")
    for w in timed_state_check(rules):
        print(f"   warning {w.code}: {w.message}")


if __name__ == "__main__":
    report("game_a.txt")
    report("game_b.txt")
