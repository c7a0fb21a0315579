"""Per-molecule reference counts from RDKit for the shipped corpus."""
import sys
from rdkit import Chem

def main(src, dst):
    with open(src) as f, open(dst, "w") as out:
        out.write("smiles\theavy\thydrogens\taromatic_atoms\trings\n")
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            s = line.split()[0]
            m = Chem.MolFromSmiles(s)
            h = sum(a.GetTotalNumHs() for a in m.GetAtoms())
            ar = sum(1 for a in m.GetAtoms() if a.GetIsAromatic())
            out.write(f"{s}\t{m.GetNumAtoms()}\t{h}\t{ar}\t{m.GetRingInfo().NumRings()}\n")

if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
