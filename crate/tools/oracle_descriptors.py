"""Reference descriptor values from RDKit for a sample of the corpus."""
import sys

from rdkit import Chem
from rdkit.Chem import Descriptors, Lipinski, rdMolDescriptors as rd


def main(src, dst, every=10):
    rows = []
    for n, line in enumerate(l for l in open(src) if l.strip() and not l.startswith("#")):
        if n % every:
            continue
        s = line.split()[0]
        m = Chem.MolFromSmiles(s)
        logp, mr = rd.CalcCrippenDescriptors(m)
        rows.append([
            s,
            f"{Descriptors.MolWt(m):.4f}",
            len(m.GetSubstructMatches(Lipinski.HDonorSmarts)),
            len(m.GetSubstructMatches(Lipinski.HAcceptorSmarts)),
            f"{rd.CalcTPSA(m):.4f}",
            rd.CalcNumRotatableBonds(m),
            rd.CalcNumRings(m),
            rd.CalcNumAromaticRings(m),
            f"{rd.CalcFractionCSP3(m):.6f}",
            f"{logp:.4f}",
            f"{mr:.4f}",
        ])
    with open(dst, "w") as f:
        f.write("smiles\tmw\thbd\thba\ttpsa\trot\trings\tarom\tfsp3\tlogp\tmr\n")
        for r in rows:
            f.write("\t".join(map(str, r)) + "\n")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
