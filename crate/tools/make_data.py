"""Builds the shipped coformer corpus and the surrogate co-crystal dataset.

Requires RDKit. Output is deterministic for a fixed seed.

    python3 tools/make_data.py --out data
"""
import argparse
import math
import os
import random

from rdkit import Chem, RDLogger
from rdkit.Chem import Crippen, Descriptors, Lipinski, rdMolDescriptors

from seeds import COFORMERS, DRUGS

RDLogger.DisableLog("rdApp.*")

ALLOWED = {"C", "N", "O", "F", "P", "S", "Cl", "Br", "I"}
SUBSTITUENTS = ["F", "Cl", "Br", "I", "C", "O", "N", "OC", "C(=O)O", "C(N)=O",
                "[N+](=O)[O-]", "C#N", "C(F)(F)F", "CC", "S(N)(=O)=O", "C=O"]
CORPUS_SIZE = 4227
DATASET_SIZE = 6029


def canon(mol):
    try:
        Chem.SanitizeMol(mol)
        smi = Chem.MolToSmiles(mol, isomericSmiles=False)
    except Exception:
        return None
    m = Chem.MolFromSmiles(smi)
    if m is None:
        return None
    return Chem.MolToSmiles(m, isomericSmiles=False)


def acceptable(smi, max_heavy=30):
    m = Chem.MolFromSmiles(smi)
    if m is None or "." in smi:
        return False
    if m.GetNumHeavyAtoms() > max_heavy or m.GetNumHeavyAtoms() < 2:
        return False
    if any(a.GetSymbol() not in ALLOWED for a in m.GetAtoms()):
        return False
    if Chem.GetFormalCharge(m) != 0:
        return False
    if any(a.GetNumRadicalElectrons() for a in m.GetAtoms()):
        return False
    return Descriptors.MolWt(m) < 450


def substitute(smi, rng):
    m = Chem.MolFromSmiles(smi)
    sites = [a.GetIdx() for a in m.GetAtoms()
             if a.GetSymbol() == "C" and a.GetTotalNumHs() > 0 and a.GetIsAromatic()]
    if not sites:
        sites = [a.GetIdx() for a in m.GetAtoms() if a.GetSymbol() == "C" and a.GetTotalNumHs() > 0]
    if not sites:
        return None
    site = rng.choice(sites)
    frag = Chem.MolFromSmiles(rng.choice(SUBSTITUENTS))
    combo = Chem.RWMol(Chem.CombineMols(m, frag))
    combo.AddBond(site, m.GetNumAtoms(), Chem.BondType.SINGLE)
    atom = combo.GetAtomWithIdx(site)
    atom.SetNoImplicit(False)
    atom.SetNumExplicitHs(0)
    return canon(combo)


def aza(smi, rng):
    m = Chem.MolFromSmiles(smi)
    sites = [a.GetIdx() for a in m.GetAtoms()
             if a.GetSymbol() == "C" and a.GetIsAromatic() and a.GetTotalNumHs() == 1 and a.GetDegree() == 2]
    if not sites:
        return None
    rw = Chem.RWMol(m)
    a = rw.GetAtomWithIdx(rng.choice(sites))
    a.SetAtomicNum(7)
    a.SetNoImplicit(False)
    a.SetNumExplicitHs(0)
    return canon(rw)


def homologate(smi, rng):
    m = Chem.MolFromSmiles(smi)
    bonds = [b for b in m.GetBonds()
             if not b.IsInRing() and b.GetBondType() == Chem.BondType.SINGLE]
    if not bonds:
        return None
    b = rng.choice(bonds)
    rw = Chem.RWMol(m)
    i, j = b.GetBeginAtomIdx(), b.GetEndAtomIdx()
    rw.RemoveBond(i, j)
    c = rw.AddAtom(Chem.Atom(6))
    rw.AddBond(i, c, Chem.BondType.SINGLE)
    rw.AddBond(c, j, Chem.BondType.SINGLE)
    return canon(rw)


def build_corpus(rng):
    seeds = []
    for line in COFORMERS.split():
        c = canon(Chem.MolFromSmiles(line)) if Chem.MolFromSmiles(line) else None
        if c and acceptable(c) and c not in seeds:
            seeds.append(c)
    pool = set(seeds)
    frontier = list(seeds)
    ops = [substitute, substitute, substitute, aza, homologate]
    while len(pool) < 3 * CORPUS_SIZE:
        parent = rng.choice(frontier)
        child = rng.choice(ops)(parent, rng)
        if child and child not in pool and acceptable(child):
            pool.add(child)
            frontier.append(child)
    rest = sorted(pool - set(seeds))
    rng.shuffle(rest)
    corpus = seeds + rest[: CORPUS_SIZE - len(seeds)]
    return seeds, corpus


def features(smi):
    m = Chem.MolFromSmiles(smi)
    return {
        "hbd": Lipinski.NumHDonors(m),
        "hba": Lipinski.NumHAcceptors(m),
        "arom": rdMolDescriptors.CalcNumAromaticRings(m),
        "rot": rdMolDescriptors.CalcNumRotatableBonds(m),
        "heavy": m.GetNumHeavyAtoms(),
        "logp": Crippen.MolLogP(m),
        "tpsa": rdMolDescriptors.CalcTPSA(m),
        "fsp3": rdMolDescriptors.CalcFractionCSP3(m),
    }


def sigmoid(z):
    return 1.0 / (1.0 + math.exp(-z))


def label_logits(fa, fb):
    hbd = fa["hbd"] + fb["hbd"]
    hba = fa["hba"] + fb["hba"]
    arom = fa["arom"] + fb["arom"]
    rot = fa["rot"] + fb["rot"]
    heavy = fa["heavy"] + fb["heavy"]
    logp = fa["logp"] + fb["logp"]
    tpsa = fa["tpsa"] + fb["tpsa"]
    fsp3 = (fa["fsp3"] + fb["fsp3"]) / 2
    # Latent plasticity scores; planar stacking is favoured by aromatic, rigid,
    # weakly H-bonded pairs, bridging by donor/acceptor-rich pairs.
    u = 0.55 * arom - 0.35 * rot - 0.25 * (hbd - 3) + 0.9 * fsp3 - 0.03 * (tpsa - 110) / 2 + 1.3
    o = 0.55 * (arom - 2.5) - 0.45 * abs(hbd - hba / 2) + 0.35 * (logp - 2.5) - 0.04 * (heavy - 30) - 1.35
    h = 0.55 * (hbd - 3) + 0.25 * (hba - 5) - 0.25 * (logp - 2.5) + 0.02 * (tpsa - 110) - 0.25 * arom + 0.75
    return 1.2 * (u + 1.75), 1.7 * (o + 1.0), 1.0 * (h - 2.5)


def build_dataset(rng, corpus):
    drugs = []
    for line in DRUGS.split():
        m = Chem.MolFromSmiles(line)
        c = Chem.MolToSmiles(m, isomericSmiles=False) if m else None
        if c and acceptable(c, max_heavy=50) and c not in drugs:
            drugs.append(c)
    feats = {}
    rows = []
    seen = set()
    while len(rows) < DATASET_SIZE:
        a = rng.choice(drugs)
        b = rng.choice(corpus)
        if (a, b) in seen or a == b:
            continue
        seen.add((a, b))
        for s in (a, b):
            if s not in feats:
                feats[s] = features(s)
        logits = label_logits(feats[a], feats[b])
        labels = []
        for z in logits:
            p = sigmoid(z)
            labels.append(1 if rng.random() < p else 0)
        rows.append((a, b, *labels))
    return drugs, rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data")
    ap.add_argument("--seed", type=int, default=20240607)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    seeds, corpus = build_corpus(rng)
    drugs, rows = build_dataset(rng, corpus)
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "coformers.smi"), "w") as f:
        f.write("# coformer corpus, one SMILES per line\n")
        for s in corpus:
            f.write(s + "\n")
    with open(os.path.join(args.out, "drugs.smi"), "w") as f:
        f.write("# drug panel used for pair records\n")
        for s in drugs:
            f.write(s + "\n")
    with open(os.path.join(args.out, "cocrystals.csv"), "w") as f:
        f.write("smiles_a,smiles_b,unobstructed,orthogonal,h_bond_bridging\n")
        for r in rows:
            f.write("%s,%s,%d,%d,%d\n" % r)
    n = len(rows)
    print("seeds", len(seeds), "corpus", len(corpus), "drugs", len(drugs), "records", n)
    for k, name in enumerate(["unobstructed", "orthogonal", "h_bond_bridging"]):
        print(name, "positive rate", sum(r[2 + k] for r in rows) / n)


if __name__ == "__main__":
    main()
