# Seed structures for the coformer corpus and the drug panel.

COFORMERS = """
OC(=O)CC(=O)O
OC(=O)CCC(=O)O
OC(=O)CCCC(=O)O
OC(=O)CCCCC(=O)O
OC(=O)CCCCCC(=O)O
OC(=O)CCCCCCC(=O)O
OC(=O)CCCCCCCC(=O)O
OC(=O)C(=O)O
O=C(O)C=CC(=O)O
OC(=O)C(O)C(O)C(=O)O
OC(=O)CC(O)(CC(=O)O)C(=O)O
OC(=O)C(O)CC(=O)O
OC(=O)c1ccccc1
OC(=O)c1ccccc1O
OC(=O)c1ccc(O)cc1
OC(=O)c1cccc(O)c1
OC(=O)c1ccc(O)c(O)c1
OC(=O)c1cc(O)cc(O)c1
OC(=O)c1cc(O)c(O)c(O)c1
OC(=O)c1ccc(N)cc1
OC(=O)c1ccccc1N
OC(=O)c1ccc(cc1)C(=O)O
OC(=O)c1cccc(c1)C(=O)O
OC(=O)c1ccccc1C(=O)O
OC(=O)c1cc(cc(c1)C(=O)O)C(=O)O
OC(=O)c1ccc(cc1)[N+](=O)[O-]
OC(=O)c1cc(cc(c1)[N+](=O)[O-])[N+](=O)[O-]
OC(=O)c1ccc(Cl)cc1
OC(=O)c1ccc(F)cc1
OC(=O)c1ccc(Br)cc1
OC(=O)c1ccc(I)cc1
OC(=O)c1ccc(C)cc1
OC(=O)c1ccc(OC)cc1
OC(=O)c1ccncc1
OC(=O)c1cccnc1
OC(=O)c1ccccn1
OC(=O)C=Cc1ccccc1
OC(=O)C=Cc1ccc(O)cc1
OC(=O)C=Cc1ccc(O)c(O)c1
OC(=O)C=Cc1ccc(O)c(OC)c1
OC(=O)Cc1ccccc1
OC(=O)c1ccc2ccccc2c1
OC(=O)c1cccc2ccccc12
OC(=O)c1c(O)ccc2ccccc12
NC(=O)c1cccnc1
NC(=O)c1ccncc1
NC(=O)c1ccccn1
NC(=O)c1ccccc1
NC(=O)c1ccccc1O
NC(=O)c1ccc(N)cc1
NC(=O)c1ncccn1
NC(=O)c1cnccn1
NC(N)=O
NC(=O)N
CC(N)=O
NC(=O)CC(N)=O
NC(=O)CCC(N)=O
NC(=O)C=CC(N)=O
O=C1NS(=O)(=O)c2ccccc12
O=C1NC(=O)c2ccccc12
O=C1CCC(=O)N1
O=C1NC(=O)C=CN1
O=c1cc[nH]c(=O)[nH]1
Cc1c[nH]c(=O)[nH]c1=O
O=c1[nH]c(=O)c2[nH]cnc2[nH]1
Cn1cnc2c1c(=O)n(C)c(=O)n2C
Cn1c(=O)c2[nH]cnc2n(C)c1=O
Cn1c(=O)c2c(ncn2C)[nH]c1=O
Nc1nc(N)nc(N)n1
Nc1ncccn1
Nc1ccccn1
Nc1ccncc1
Nc1cccnc1
Nc1ccc(cc1)S(N)(=O)=O
NS(=O)(=O)c1ccccc1
c1ccncc1
c1ccc(nc1)-c1ccccn1
c1cc(ccn1)-c1ccncc1
c1cnc(cn1)
c1ccc2ncccc2c1
c1ccc2cnccc2c1
c1cnc2ccccc2n1
c1ccc(cc1)-c1ccccc1
C(=Cc1ccncc1)c1ccncc1
C(Cc1ccncc1)c1ccncc1
c1cc(ccn1)N=Nc1ccncc1
c1cnccc1C(=O)NN
NNC(=O)c1ccncc1
O=C(NN=Cc1ccccc1)c1ccncc1
Oc1ccccc1
Oc1ccc(O)cc1
Oc1cccc(O)c1
Oc1ccccc1O
Oc1cc(O)cc(O)c1
Oc1ccc(cc1)C(=O)c1ccc(O)cc1
Oc1ccc(cc1)-c1ccc(O)cc1
Oc1ccc2ccccc2c1
Oc1cccc2ccccc12
Oc1ccc(cc1)[N+](=O)[O-]
Oc1ccc(Cl)cc1
Oc1ccc(C)cc1
CC(=O)Nc1ccc(O)cc1
COc1cc(C=O)ccc1O
O=Cc1ccc(O)cc1
Oc1ccc(C=Cc2cc(O)cc(O)c2)cc1
OCC(O)CO
OCC(O)C(O)C(O)C(O)CO
OCC(O)C(O)C(O)CO
OC1C(O)C(O)C(O)C(O)C1O
OCC1OC(O)C(O)C(O)C1O
NCC(O)=O
CC(N)C(O)=O
CC(C)C(N)C(O)=O
CC(C)CC(N)C(O)=O
NC(Cc1ccccc1)C(O)=O
NC(Cc1ccc(O)cc1)C(O)=O
NC(CO)C(O)=O
NC(CCC(N)=O)C(O)=O
NC(CC(O)=O)C(O)=O
NC(CCC(O)=O)C(O)=O
OC(=O)C1CCCN1
NCCCCC(N)C(O)=O
NC(Cc1c[nH]c2ccccc12)C(O)=O
NC(Cc1cnc[nH]1)C(O)=O
CSCCC(N)C(O)=O
NC(CS)C(O)=O
CC(O)C(O)=O
OCC(O)=O
CC(=O)C(O)=O
OC(=O)C(=O)CC(=O)O
CC(O)=O
OC(=O)CC(O)=O
OC(=O)CCCCCCCCC(O)=O
CCCCCCCCCCCC(O)=O
CCCCCCCCCCCCCCCC(O)=O
CCCCCCCCC=CCCCCCCCC(O)=O
OC(=O)C1=CC=CC=C1
O=C1C=CC(=O)C=C1
O=C1c2ccccc2C(=O)c2ccccc12
O=C1NC(=O)NC1=O
O=C1CNC(=O)N1
O=C1NC(=O)C(N1)=O
NC(=N)N
NC(=O)NC(N)=O
CC(C)(C)c1ccc(O)cc1
OC(=O)CN(CC(O)=O)CC(O)=O
OC(=O)c1cc(=O)[nH]c(=O)[nH]1
OC(=O)c1ccc(=O)[nH]c1
O=c1cccc[nH]1
Oc1ncccc1
Cc1ccc(cc1)S(O)(=O)=O
OS(=O)(=O)c1ccccc1
CS(O)(=O)=O
OP(O)(O)=O
OC(=O)c1ccc(cc1)S(=O)(=O)O
OC(=O)c1cc(Cl)ccc1O
OC(=O)c1cc(ccc1O)[N+](=O)[O-]
OC(=O)c1ccc(cc1O)N
Nc1ccc(cc1)C(=O)c1ccccc1
NC(=O)c1ccc(cc1)C(N)=O
c1ccc2[nH]ccc2c1
c1ccc2[nH]cnc2c1
c1ccc2occc2c1
c1ccc2sccc2c1
c1ccsc1
c1ccoc1
c1cc[nH]c1
c1cn[nH]c1
c1c[nH]cn1
Cc1ccccc1
Cc1ccc(C)cc1
CC(C)O
CCO
OCCO
OCCCO
CN(C)C=O
CS(C)=O
O=C1CCCCC1
OC1CCCCC1
NC1CCCCC1
C1CCNCC1
C1COCCN1
C1CNCCN1
O=C(O)C1CCCCC1
OC(=O)C1CCC(CC1)C(O)=O
Brc1ccc(Br)cc1
Ic1ccc(I)cc1
Fc1c(F)c(F)c(I)c(F)c1F
Fc1c(F)c(I)c(F)c(F)c1I
Ic1c(F)c(F)c(I)c(F)c1F
ClC(Cl)(Cl)Cl
FC(F)(F)c1ccc(cc1)C(O)=O
N#Cc1ccc(cc1)C#N
N#Cc1ccncc1
CC(=O)Nc1ccccc1
CC(=O)OC1=CC=CC=C1C(O)=O
COc1ccc(cc1)C(O)=O
O=C(O)c1ccc(o1)
OC(=O)c1cccs1
OC(=O)c1ccc[nH]1
OC(=O)c1cnccn1
OC(=O)c1ncccc1C(O)=O
OC(=O)c1cccc(n1)C(O)=O
OC(=O)c1ccc(cn1)C(O)=O
O=C(O)CSCC(=O)O
OC(=O)CCSCCC(O)=O
NC(=S)N
NC(=S)c1ccncc1
CC1=CC(=O)NC(=O)N1
"""

DRUGS = """
CN1C=NC2=C1C(=O)N(C(=O)N2C)C
Cn1c(=O)c2[nH]cnc2n(C)c1=O
NC(=O)N1c2ccccc2C=Cc2ccccc12
CC(C)Cc1ccc(cc1)C(C)C(O)=O
COc1ccc2cc(ccc2c1)C(C)C(O)=O
CC(=O)Nc1ccc(O)cc1
CC(=O)Oc1ccccc1C(O)=O
OC(=O)c1ccccc1O
[O-][N+](=O)OCCNC(=O)c1cccnc1
Clc1ccc(cc1)C(=O)c1ccc(OC(C)(C)C(O)=O)cc1
OC(=O)Cc1ccccc1Nc1c(Cl)cccc1Cl
CC1=C(C(=O)Nc2ccccn2)N(C)S(=O)(=O)c2ccccc12
CN1C(C(=O)Nc2ccccn2)=C(O)c2ccccc2S1(=O)=O
OC(=O)c1ccccc1Nc1cccc(c1)C(F)(F)F
Cc1cccc(Nc2ccccc2C(O)=O)c1C
COc1ccc2[nH]c(nc2c1)S(=O)Cc1ncc(C)c(OC)c1C
Nc1ccc(cc1)S(=O)(=O)Nc1ccccn1
Cc1cc(NS(=O)(=O)c2ccc(N)cc2)no1
Nc1ccc(cc1)S(=O)(=O)Nc1ncccn1
Nc1ccc(cc1)S(=O)(=O)Nc1nccs1
NC(=O)c1ccccc1O
O=C1NC(=O)C(N1)(c1ccccc1)c1ccccc1
CCC1(C(=O)NC(=O)NC1=O)c1ccccc1
CC(C)NCC(O)COc1cccc2ccccc12
CC(C)NCC(O)c1ccc(O)c(O)c1
CNCC(O)c1ccc(O)c(O)c1
CN(C)C(=N)NC(N)=N
OC(=O)CCCc1ccc(cc1)N(CCCl)CCCl
Clc1ccc(cc1)C(c1ccccc1)N1CCN(CCOCC(O)=O)CC1
CCN(CC)CCNC(=O)c1ccc(N)cc1
COc1cc(cc(OC)c1OC)Cc1cnc(N)nc1N
Nc1nc(N)c2nc(cnc2n1)-c1ccccc1
CC(=O)Nc1nnc(s1)S(N)(=O)=O
NS(=O)(=O)c1cc2c(NC(Cl)NS2(=O)=O)cc1Cl
NS(=O)(=O)c1cc2c(NCNS2(=O)=O)cc1Cl
OC(=O)c1cn2CCC(C(=O)c3ccccc3)c2c1
COc1ccc(cc1)C(=O)CC(=O)c1ccc(cc1)C(C)(C)C
O=C(O)c1ccccc1C(=O)c1ccccc1
OC(=O)C(Cc1ccccc1)NC(=O)C(N)CC(O)=O
Oc1ccc(cc1)C1(OC(=O)c2ccccc12)c1ccc(O)cc1
Cn1c(=O)c2c(ncn2C)n(C)c1=O
CC(C)(C)NCC(O)c1ccc(O)c(CO)c1
OCc1cc(ccc1O)C(O)CNCCCCCCOCCCCc1ccccc1
Clc1ccccc1C1(NC)CCCCC1=O
CN1CCC23C4Oc5c3c(CC1C2C=CC4O)ccc5O
COC(=O)C1=C(C)NC(C)=C(C1c1ccccc1[N+]([O-])=O)C(=O)OC
NC1=NC(=O)c2ncn(COCCO)c2N1
Nc1ccn(C2OC(CO)C(O)C2O)c(=O)n1
O=C(O)CCC(=O)c1ccc2ccccc2c1
CC(C)(C)c1ccc(cc1)C(O)CCCN1CCC(CC1)C(O)(c1ccccc1)c1ccccc1
OC(=O)c1cc(ccc1O)N=Nc1ccc(cc1)S(=O)(=O)Nc1ccccn1
Nc1ncnc2n(cnc12)C1OC(CO)C(O)C1O
CCOC(=O)C1=C(COCCN)NC(C)=C(C1c1ccccc1Cl)C(=O)OC
O=C1CN=C(c2ccccc2)c2cc(Cl)ccc2N1
CN1C(=O)CN=C(c2ccccc2)c2cc(Cl)ccc12
OC1N=C(c2ccccc2)c2cc(Cl)ccc2NC1=O
CC(CS)C(=O)N1CCCC1C(O)=O
OC(=O)C1CCCN1C(=O)C(C)CS
Oc1ccc(cc1)C(=O)c1ccccc1
NC(=O)c1cnccn1
Nc1nc2[nH]cc(CCc3ccc(cc3)C(=O)NC(CCC(O)=O)C(O)=O)c2c(=O)[nH]1
Fc1ccc(cc1)C(=O)CCCN1CCC(O)(CC1)c1ccc(Cl)cc1
"""
