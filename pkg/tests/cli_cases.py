"""Small CLI invocations with recorded outputs under tests/golden."""

MASTER_B = '{"kind": "MasterCode", "params": {"code": "b"}}'
SL1 = '{"kind": "SL", "params": {"N": {"finite": [{"members": [], "repeat": {"start": 1, "block": [1]}}]}}}'
TL = '{"kind": "TL", "params": {"L": [1, 2, 3]}}'

CASES = {
    "tree_dump_plain3_json": ["tree", "dump", "--family", '{"kind": "PlainT3"}', "--radius", "2"],
    "tree_dump_singled_tsv": ["tree", "dump", "--family", '{"kind": "SingleD"}', "--radius", "2", "--format", "tsv"],
    "tree_dump_master_dot": ["tree", "dump", "--family", MASTER_B, "--radius", "2", "--format", "dot"],
    "stab_enum_master": ["stab", "enum", "--family", MASTER_B, "--n", "4"],
    "ball_code_sl1_text": ["ball", "code", "--family", SL1, "--r", "2", "--format", "text"],
    "ball_code_plain5_dot": ["ball", "code", "--family", '{"kind": "PlainT5"}', "--r", "1", "--format", "dot"],
    "dist_tau_singled": ["dist", "tau", "--family", '{"kind": "SingleD"}', "--vertex2", "b", "--max-r", "5"],
    "census_sl1_tsv": ["census", "--family", SL1, "--r", "2", "--R", "12", "--format", "tsv"],
    "census_master_noprune": ["census", "--family", MASTER_B, "--r", "1", "--R", "6", "--no-prune"],
    "eqc_certify_master_text": ["eqc", "certify", "--family", MASTER_B, "--r", "2", "--R", "10", "--n", "4", "--format", "text"],
    "eqc_certify_tl_refused": ["eqc", "certify", "--family", TL, "--r", "2", "--R", "6", "--n", "3", "--format", "text"],
    "cb_rank_alpha2": ["cb", "rank", "--alpha", "2"],
    "subshift_stats_text": ["subshift", "stats", "--max-len", "2", "--W", "200", "--format", "text"],
    "subshift_discriminate": ["subshift", "discriminate", "--n", "3"],
    "g5_build_h": ["g5", "build-h", "--C", "b", "--C2", "c"],
    "g5_escape_text": ["g5", "escape", "--C", "b", "--C2", "c", "--radius", "4", "--max-size", "3", "--format", "text"],
    "expansion_search": ["expansion", "search", "--C", "b", "--C2", "c", "--max-size", "4", "--window", "5"],
    "t4_certificate_text": ["t4", "certificate", "--C", "b", "--C2", "c", "--max-size", "3", "--window", "4", "--format", "text"],
    "finitary_dichotomy": ["finitary", "dichotomy", "--H", "fixing-evens", "--l", "2", "--W", "8"],
    "finitary_witness_tsv": ["finitary", "witness", "--H", "fixing-evens", "--steps", "3", "--W", "12", "--format", "tsv"],
}
