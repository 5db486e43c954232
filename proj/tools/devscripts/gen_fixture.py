#
# retrochem - retrosynthesis evaluation and instruction-data toolkit
# SPDX-License-Identifier: Apache-2.0
#
import random
from rdkit import Chem
from rdkit import RDLogger
RDLogger.DisableLog('rdApp.*')
random.seed(20240611)
case_molecules = [
 "CNc1nc(Cl)ncc1[N+](=O)[O-]", "CN", "O=[N+]([O-])c1cnc(Cl)nc1Cl", "C1COCC1",
 "CCOC(=O)c1cnc(N)c2c(COc3cc(-c4nnc(-c5ccc(Cl)cc5)o4)ccc3C)csc12", "N",
 "Clc1c2c(scc2COc2c(C)ccc(-c3nnc(-c4ccc(Cl)cc4)o3)c2)c(C(OCC)=O)cn1", "C(C)(O)C",
 "CNCC1Cc2cc(-c3ccccc3)cc(-c3ccccc3Cl)c2O1",
 "Cc1ccc(S(=O)(=O)OCC2Cc3cc(-c4ccccc4)cc(-c4ccccc4Cl)c3O2)cc1", "S(C)(=O)C",
 "COc1ccc([C@@H]2Sc3cc(C)ccc3N(CCN(C)Cc3ccccc3)C(=O)[C@@H]2OC(C)=O)cc1",
 "CC(=O)OC(C)=O", "c12ccc(C)cc1S[C@@H](c1ccc(OC)cc1)[C@@H](O)C(=O)N2CCN(C)Cc1ccccc1",
 "c1cccnc1", "CCc1nc2ccccc2c(=O)n1CCCl", "O=S(Cl)Cl", "c12ccccc1nc(CC)n(CCO)c2=O",
 "ClC(Cl)Cl", "C=C[C@H](c1ccccc1)n1cnc2ccccc21", "C=C", "c12ccccc1[nH]cn2",
 "O=C(OC/C=C/c1ccccc1)OC", "c1ccoc1", "C=C[C@H](c1ccc(Br)cc1)n1cnc2ccccc21",
 "c1nc2ccccc2[nH]1", "CBr", "COC(=O)OC\\C=C\\c1ccc(Br)cc1",
]
small = ["CCO","OCC","CC(=O)O","CC(C)O","C1CC1","C1CCC1","C1CCCCC1","c1ccccc1","Cc1ccccc1","Oc1ccccc1",
 "N[C@@H](C)C(=O)O","N[C@H](C)C(=O)O","F/C=C/F","F/C=C\\F","C/C=C/C","C/C=C\\C","CC(C)(C)C","OC(=O)C(=O)O",
 "C#N","CC#N","C[N+](C)(C)C","[NH4+]","[O-]C(=O)C","O=S(=O)(O)O","CS(C)=O","c1ccncc1","c1cc[nH]c1","c1ccsc1",
 "C1=CC=CC=C1","C[C@H](O)CC","C[C@@H](O)CC","OC[C@H](O)[C@@H](O)C=O","ClC=CCl","Cl/C=C/Cl","Cl/C=C\\Cl",
 "[2H]C", "[13CH4]", "C1CC2CCC1C2", "C12C3C4C1C5C2C3C45", "CC(C)(C)OC(=O)N", "NC(=O)N", "O=C=O", "N#N",
 "[Na+].[Cl-]", "CC[O-].[Na+]", "OB(O)c1ccccc1", "FC(F)(F)C(=O)O", "C[Si](C)(C)Cl", "CP(=O)(O)O",
 "c1ccc2[nH]ccc2c1", "C1CCOC1", "C1COCCO1", "CN(C)C=O", "CCN(CC)CC", "Brc1ccccc1", "Ic1ccccc1", "C[C@]1(O)CCCC1",
 "F[C@](Cl)(Br)I", "C(=O)Cl", "CC(=O)Cl", "O=Cc1ccco1", "Cn1ccnc1", "c1cn[nH]c1", "c1ncncn1", "C=CC=C", "CC=CC=O",
]
subs = ["F","Cl","Br","C","O","N","C(=O)O","C#N","OC","C(F)(F)F","[N+](=O)[O-]","C=O","S(=O)(=O)C"]

def mutate(m):
    rw = Chem.RWMol(m)
    op = random.random()
    atoms = [a.GetIdx() for a in rw.GetAtoms() if a.GetTotalNumHs() > 0]
    if op < 0.6 and atoms:
        idx = random.choice(atoms)
        frag = Chem.MolFromSmiles(subs[random.randrange(len(subs))])
        combo = Chem.RWMol(Chem.CombineMols(rw, frag))
        combo.AddBond(idx, rw.GetNumAtoms(), Chem.BondType.SINGLE)
        return combo.GetMol()
    if op < 0.8:
        arom = [a.GetIdx() for a in rw.GetAtoms() if a.GetIsAromatic() and a.GetSymbol()=="C" and a.GetDegree()==2]
        if arom:
            a = rw.GetAtomWithIdx(random.choice(arom)); a.SetAtomicNum(7); a.SetNoImplicit(False); a.SetNumExplicitHs(0)
            return rw.GetMol()
    cands = [a.GetIdx() for a in rw.GetAtoms() if a.GetSymbol()=="C" and a.GetDegree()>=3 and not a.GetIsAromatic()]
    if cands:
        a = rw.GetAtomWithIdx(random.choice(cands)); a.SetChiralTag(random.choice([Chem.ChiralType.CHI_TETRAHEDRAL_CW, Chem.ChiralType.CHI_TETRAHEDRAL_CCW]))
    return rw.GetMol()

out = []
seen = set()
def add(s):
    m = Chem.MolFromSmiles(s)
    if m is None: return
    can = Chem.MolToSmiles(m)
    if can in seen: return
    seen.add(can); out.append(can)
for s in case_molecules + small: add(s)
base = [Chem.MolFromSmiles(s) for s in case_molecules + small]
base = [b for b in base if b is not None and b.GetNumAtoms() >= 4]
tries = 0
while len(out) < 500 and tries < 100000:
    tries += 1
    m = random.choice(base)
    for _ in range(random.randint(1,3)):
        try:
            m2 = mutate(m)
            Chem.SanitizeMol(m2)
            m = m2
        except Exception:
            break
    s = Chem.MolToSmiles(m)
    if Chem.MolFromSmiles(s) is None: continue
    if m.GetNumAtoms() > 70: continue
    add(s)
# small molecule variants for the exhaustive permutation tier
while sum(1 for s in out if Chem.MolFromSmiles(s).GetNumAtoms() <= 8) < 60:
    m = random.choice([Chem.MolFromSmiles(s) for s in small if Chem.MolFromSmiles(s).GetNumAtoms() <= 6])
    try:
        m2 = mutate(m); Chem.SanitizeMol(m2)
    except Exception:
        continue
    if m2.GetNumAtoms() <= 8: 
        n = len(out); add(Chem.MolToSmiles(m2))
import math
big=[x for x in out if Chem.MolFromSmiles(x).GetNumAtoms()>8]
sm=[x for x in out if Chem.MolFromSmiles(x).GetNumAtoms()<=8]
budget=0; keep=[]
for x in sm:
    f=math.factorial(Chem.MolFromSmiles(x).GetNumAtoms())
    if budget+f>500000 and f>720: continue
    budget+=f; keep.append(x)
while len(big)+len(keep)<500 and tries<400000:
    tries+=1
    m=random.choice([b for b in base if b.GetNumAtoms()>6])
    for _ in range(random.randint(1,4)):
        try:
            m2=mutate(m); Chem.SanitizeMol(m2); m=m2
        except Exception: break
    x=Chem.MolToSmiles(m)
    if m.GetNumAtoms()<=8 or m.GetNumAtoms()>70 or x in seen: continue
    seen.add(x); big.append(x)
out=[x for x in out if x in set(big) or x in set(keep)][:500]
out += [x for x in big if x not in set(out)][:500-len(out)]
print("perm budget", budget)
print(len(out), sum(1 for s in out if Chem.MolFromSmiles(s).GetNumAtoms() <= 8))
open("tests/data/canonical_fixture.smi","w").write("\n".join(out)+"\n")
