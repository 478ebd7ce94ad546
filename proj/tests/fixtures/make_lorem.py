"""Regenerates lorem_extended.txt: 2969 characters, 54 distinct, seeded."""
import random
import sys

LENGTH = 2969
WORDS = """lorem ipsum dolor sit amet consectetur adipiscing elit sed do eiusmod tempor incididunt ut labore et
dolore magna aliqua enim ad minim veniam quis nostrud exercitation ullamco laboris nisi aliquip ex ea commodo
consequat duis aute irure in reprehenderit voluptate velit esse cillum fugiat nulla pariatur excepteur sint
occaecat cupidatat non proident sunt culpa qui officia deserunt mollit anim id est laborum curabitur pretium
tincidunt lacus nunc pulvinar sapien ligula mauris viverra maecenas accumsan lacinia gravida hendrerit
vestibulum porta fames turpis egestas praesent luctus tristique senectus netus malesuada placerat orci
zephyrus myrtus lyra xystus hymenaeos cyclops zelus pyxis""".split()
CAPITALS = ["Aenean", "Bibendum", "Curabitur", "Donec", "Etiam", "Fusce", "Gravida", "Hendrerit", "Integer",
            "Lorem", "Mauris", "Nulla", "Orci", "Pellentesque", "Quisque", "Rhoncus", "Sed", "Tempus", "Ut",
            "Vivamus", "Xystus", "Ypsilon", "Zephyrus"]
ENDINGS = ".!?"
INNER = [",", ";", ":", " -"]


def sentence(rng):
    words = [rng.choice(CAPITALS)] + [rng.choice(WORDS) for _ in range(rng.randint(5, 13))]
    out = words[0]
    for w in words[1:]:
        if rng.random() < 0.12:
            out += rng.choice(INNER)
        out += " " + w
    return out + rng.choices(ENDINGS, weights=[8, 1, 1])[0]


def build(seed):
    rng = random.Random(seed)
    text = ""
    while len(text) < LENGTH:
        text += sentence(rng) + " "
    return text[:LENGTH - 1].rstrip() + "."


def main():
    for seed in range(1000):
        text = build(seed)
        if len(text) == LENGTH and len(set(text)) == 54:
            sys.stdout.write(text)
            return
    raise SystemExit("no seed produced 54 distinct characters")


if __name__ == "__main__":
    main()
