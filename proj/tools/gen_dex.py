#!/usr/bin/env python3
"""Regenerates data/dex.json, the bundled species/move/type-chart file.

The chart is written out from per-attacker strength lists; the test suite
checks it against a separately transcribed grid in tests/data.
"""

import json
import pathlib

TYPES = [
    "Normal", "Fire", "Water", "Electric", "Grass", "Ice", "Fighting", "Poison",
    "Ground", "Flying", "Psychic", "Bug", "Rock", "Ghost", "Dragon", "Dark",
    "Steel", "Fairy",
]

# attacker: (super effective, not very effective, no effect)
MATCHUPS = {
    "Normal": ([], ["Rock", "Steel"], ["Ghost"]),
    "Fire": (["Grass", "Ice", "Bug", "Steel"], ["Fire", "Water", "Rock", "Dragon"], []),
    "Water": (["Fire", "Ground", "Rock"], ["Water", "Grass", "Dragon"], []),
    "Electric": (["Water", "Flying"], ["Electric", "Grass", "Dragon"], ["Ground"]),
    "Grass": (["Water", "Ground", "Rock"],
              ["Fire", "Grass", "Poison", "Flying", "Bug", "Dragon", "Steel"], []),
    "Ice": (["Grass", "Ground", "Flying", "Dragon"], ["Fire", "Water", "Ice", "Steel"], []),
    "Fighting": (["Normal", "Ice", "Rock", "Dark", "Steel"],
                 ["Poison", "Flying", "Psychic", "Bug", "Fairy"], ["Ghost"]),
    "Poison": (["Grass", "Fairy"], ["Poison", "Ground", "Rock", "Ghost"], ["Steel"]),
    "Ground": (["Fire", "Electric", "Poison", "Rock", "Steel"], ["Grass", "Bug"], ["Flying"]),
    "Flying": (["Grass", "Fighting", "Bug"], ["Electric", "Rock", "Steel"], []),
    "Psychic": (["Fighting", "Poison"], ["Psychic", "Steel"], ["Dark"]),
    "Bug": (["Grass", "Psychic", "Dark"],
            ["Fire", "Fighting", "Poison", "Flying", "Ghost", "Steel", "Fairy"], []),
    "Rock": (["Fire", "Ice", "Flying", "Bug"], ["Fighting", "Ground", "Steel"], []),
    "Ghost": (["Psychic", "Ghost"], ["Dark"], ["Normal"]),
    "Dragon": (["Dragon"], ["Steel"], ["Fairy"]),
    "Dark": (["Psychic", "Ghost"], ["Fighting", "Dark", "Fairy"], []),
    "Steel": (["Ice", "Rock", "Fairy"], ["Fire", "Water", "Electric", "Steel"], []),
    "Fairy": (["Fighting", "Dragon", "Dark"], ["Fire", "Poison", "Steel"], []),
}

AH = "AlwaysHits"


def eff(status, chance):
    return {"status": status, "chance": chance}


# name, type, category, power, accuracy, priority, effect
MOVES = [
    ("Thunderbolt", "Electric", "Special", 95, 100, 0, eff("Paralysis", 0.1)),
    ("Thunder", "Electric", "Special", 120, 70, 0, eff("Paralysis", 0.3)),
    ("Thunder Wave", "Electric", "Status", 0, 100, 0, eff("Paralysis", 1.0)),
    ("Thunder Punch", "Electric", "Physical", 75, 100, 0, eff("Paralysis", 0.1)),
    ("Ice Beam", "Ice", "Special", 95, 100, 0, eff("Freeze", 0.1)),
    ("Ice Punch", "Ice", "Physical", 75, 100, 0, eff("Freeze", 0.1)),
    ("Flamethrower", "Fire", "Special", 95, 100, 0, eff("Burn", 0.1)),
    ("Fire Blast", "Fire", "Special", 120, 85, 0, eff("Burn", 0.1)),
    ("Fire Punch", "Fire", "Physical", 75, 100, 0, eff("Burn", 0.1)),
    ("Blaze Kick", "Fire", "Physical", 85, 90, 0, eff("Burn", 0.1)),
    ("Sacred Fire", "Fire", "Physical", 100, 95, 0, eff("Burn", 0.5)),
    ("Overheat", "Fire", "Special", 140, 90, 0, None),
    ("Will-O-Wisp", "Fire", "Status", 0, 75, 0, eff("Burn", 1.0)),
    ("Surf", "Water", "Special", 95, 100, 0, None),
    ("Hydro Pump", "Water", "Special", 120, 80, 0, None),
    ("Waterfall", "Water", "Physical", 80, 100, 0, None),
    ("Earthquake", "Ground", "Physical", 100, 100, 0, None),
    ("Psychic", "Psychic", "Special", 90, 100, 0, None),
    ("Hypnosis", "Psychic", "Status", 0, 60, 0, eff("Sleep", 1.0)),
    ("Shadow Ball", "Ghost", "Special", 80, 100, 0, None),
    ("Sludge Bomb", "Poison", "Special", 90, 100, 0, eff("Poison", 0.3)),
    ("Toxic", "Poison", "Status", 0, 85, 0, eff("Poison", 1.0)),
    ("Giga Drain", "Grass", "Special", 60, 100, 0, None),
    ("Leaf Blade", "Grass", "Physical", 90, 100, 0, None),
    ("Sleep Powder", "Grass", "Status", 0, 75, 0, eff("Sleep", 1.0)),
    ("Crunch", "Dark", "Physical", 80, 100, 0, None),
    ("Rock Slide", "Rock", "Physical", 75, 90, 0, None),
    ("Ancient Power", "Rock", "Special", 60, 100, 0, None),
    ("Meteor Mash", "Steel", "Physical", 100, 85, 0, None),
    ("Steel Wing", "Steel", "Physical", 70, 90, 0, None),
    ("Flash Cannon", "Steel", "Special", 80, 100, 0, None),
    ("Dragon Claw", "Dragon", "Physical", 80, 100, 0, None),
    ("Extreme Speed", "Normal", "Physical", 80, 100, 1, None),
    ("Quick Attack", "Normal", "Physical", 40, 100, 1, None),
    ("Body Slam", "Normal", "Physical", 85, 100, 0, eff("Paralysis", 0.3)),
    ("Aerial Ace", "Flying", "Physical", 60, AH, 0, None),
    ("Drill Peck", "Flying", "Physical", 80, 100, 0, None),
    ("Aeroblast", "Flying", "Special", 100, 95, 0, None),
    ("Brick Break", "Fighting", "Physical", 75, 100, 0, None),
    ("Sky Uppercut", "Fighting", "Physical", 85, 90, 0, None),
    ("Megahorn", "Bug", "Physical", 120, 85, 0, None),
]

# name, dex_id, types, (hp, atk, def, spa, spd, spe), moves, auto_weather
# Pool order is draft order; the first entries line up with the sample team
# pick used in the protocol tests (0 Gyarados, 3 Magnezone, 5 Gliscor).
SPECIES = [
    ("Gyarados", 130, ["Water", "Flying"], (95, 125, 79, 60, 100, 81),
     ["Waterfall", "Earthquake", "Crunch", "Thunder Wave"], None),
    ("Venusaur", 3, ["Grass", "Poison"], (80, 82, 83, 100, 100, 80),
     ["Giga Drain", "Sludge Bomb", "Sleep Powder", "Earthquake"], None),
    ("Charizard", 6, ["Fire", "Flying"], (78, 84, 78, 109, 85, 100),
     ["Flamethrower", "Aerial Ace", "Earthquake", "Dragon Claw"], None),
    ("Magnezone", 462, ["Electric", "Steel"], (70, 70, 115, 130, 90, 60),
     ["Thunderbolt", "Flash Cannon", "Thunder Wave", "Thunder"], None),
    ("Alakazam", 65, ["Psychic"], (55, 50, 45, 135, 85, 120),
     ["Psychic", "Shadow Ball", "Fire Punch", "Thunder Wave"], None),
    ("Gliscor", 472, ["Ground", "Flying"], (75, 95, 125, 45, 75, 95),
     ["Earthquake", "Aerial Ace", "Rock Slide", "Toxic"], None),
    ("Jolteon", 135, ["Electric"], (65, 65, 60, 110, 95, 130),
     ["Shadow Ball", "Thunderbolt", "Thunder Wave", "Quick Attack"], None),
    ("Gengar", 94, ["Ghost", "Poison"], (60, 65, 60, 130, 75, 110),
     ["Shadow Ball", "Sludge Bomb", "Thunderbolt", "Hypnosis"], None),
    ("Lapras", 131, ["Water", "Ice"], (130, 85, 80, 85, 95, 60),
     ["Surf", "Ice Beam", "Thunderbolt", "Body Slam"], None),
    ("Snorlax", 143, ["Normal"], (160, 110, 65, 65, 110, 30),
     ["Body Slam", "Earthquake", "Shadow Ball", "Fire Punch"], None),
    ("Dragonite", 149, ["Dragon", "Flying"], (91, 134, 95, 100, 100, 80),
     ["Dragon Claw", "Extreme Speed", "Earthquake", "Thunder Punch"], None),
    ("Mewtwo", 150, ["Psychic"], (106, 110, 90, 154, 90, 130),
     ["Psychic", "Ice Beam", "Thunderbolt", "Flamethrower"], None),
    ("Heracross", 214, ["Bug", "Fighting"], (80, 125, 75, 40, 95, 85),
     ["Megahorn", "Brick Break", "Rock Slide", "Earthquake"], None),
    ("Starmie", 121, ["Water", "Psychic"], (60, 75, 85, 100, 85, 115),
     ["Surf", "Psychic", "Thunderbolt", "Ice Beam"], None),
    ("Zapdos", 145, ["Electric", "Flying"], (90, 90, 85, 125, 90, 100),
     ["Thunderbolt", "Drill Peck", "Thunder", "Thunder Wave"], None),
    ("Raikou", 243, ["Electric"], (90, 85, 75, 115, 100, 115),
     ["Thunderbolt", "Crunch", "Shadow Ball", "Thunder Wave"], None),
    ("Suicune", 245, ["Water"], (100, 75, 115, 90, 115, 85),
     ["Surf", "Ice Beam", "Hydro Pump", "Toxic"], None),
    ("Tyranitar", 248, ["Rock", "Dark"], (100, 134, 110, 95, 100, 61),
     ["Rock Slide", "Crunch", "Earthquake", "Fire Blast"], "Sand"),
    ("Skarmory", 227, ["Steel", "Flying"], (65, 80, 140, 40, 70, 70),
     ["Drill Peck", "Steel Wing", "Toxic", "Aerial Ace"], None),
    ("Blissey", 242, ["Normal"], (255, 10, 10, 75, 135, 55),
     ["Ice Beam", "Thunderbolt", "Flamethrower", "Toxic"], None),
    ("Lugia", 249, ["Psychic", "Flying"], (106, 90, 130, 90, 154, 110),
     ["Aeroblast", "Psychic", "Ice Beam", "Thunder Wave"], None),
    ("Ho-Oh", 250, ["Fire", "Flying"], (106, 130, 90, 110, 154, 90),
     ["Sacred Fire", "Earthquake", "Thunderbolt", "Steel Wing"], None),
    ("Celebi", 251, ["Psychic", "Grass"], (100, 100, 100, 100, 100, 100),
     ["Psychic", "Giga Drain", "Ancient Power", "Toxic"], None),
    ("Blaziken", 257, ["Fire", "Fighting"], (80, 120, 70, 110, 70, 80),
     ["Blaze Kick", "Sky Uppercut", "Rock Slide", "Thunder Punch"], None),
    ("Swampert", 260, ["Water", "Ground"], (100, 110, 90, 85, 90, 60),
     ["Surf", "Earthquake", "Ice Beam", "Rock Slide"], None),
    ("Salamence", 373, ["Dragon", "Flying"], (95, 135, 80, 110, 80, 100),
     ["Dragon Claw", "Earthquake", "Fire Blast", "Aerial Ace"], None),
    ("Metagross", 376, ["Steel", "Psychic"], (80, 135, 130, 95, 90, 70),
     ["Meteor Mash", "Earthquake", "Psychic", "Thunder Punch"], None),
    ("Kyogre", 382, ["Water"], (100, 100, 90, 150, 140, 90),
     ["Surf", "Hydro Pump", "Ice Beam", "Thunder"], "Rain"),
    ("Groudon", 383, ["Ground"], (100, 150, 140, 100, 90, 90),
     ["Earthquake", "Rock Slide", "Fire Blast", "Thunder Wave"], "Sun"),
    ("Rayquaza", 384, ["Dragon", "Flying"], (105, 150, 90, 150, 90, 95),
     ["Dragon Claw", "Extreme Speed", "Earthquake", "Overheat"], None),
]


def chart():
    out = {}
    for atk in TYPES:
        se, nve, imm = MATCHUPS[atk]
        row = {}
        for d in TYPES:
            row[d] = 2 if d in se else 0.5 if d in nve else 0 if d in imm else 1
        out[atk] = row
    return out


def main():
    stat_keys = ["hp", "atk", "def", "spa", "spd", "spe"]
    doc = {
        "types": TYPES,
        "chart": chart(),
        "moves": [
            {"name": n, "type": t, "category": c, "power": p, "accuracy": a,
             "priority": pr, "effect": e}
            for (n, t, c, p, a, pr, e) in MOVES
        ],
        "species": [
            {"dex_id": d, "name": n, "types": ts,
             "base_stats": dict(zip(stat_keys, st)), "moves": mv,
             "auto_weather": w}
            for (n, d, ts, st, mv, w) in SPECIES
        ],
        "pool": [s[0] for s in SPECIES],
    }
    path = pathlib.Path(__file__).resolve().parent.parent / "data" / "dex.json"
    path.write_text(json.dumps(doc, indent=1, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
