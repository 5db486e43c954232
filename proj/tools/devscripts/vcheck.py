#
# retrochem - retrosynthesis evaluation and instruction-data toolkit
# SPDX-License-Identifier: Apache-2.0
#
from rdkit import Chem, RDLogger
RDLogger.DisableLog('rdApp.*')
for line in open('tests/data/validity_suite.tsv'):
    if line.startswith('#'): continue
    s, exp, note = line.rstrip('\n').split('\t')
    m = Chem.MolFromSmiles(s)
    got = 'valid' if m is not None else 'invalid'
    if got != exp: print('RDKIT DISAGREES', s, exp, got)
