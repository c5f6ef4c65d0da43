"""Stable polynomial maps on Schubert-graph point spaces."""

from ._dscrypt import (
    DegreeExceeded,
    DscryptError,
    MessageCapExceeded,
    PolyMap,
    Ring,
    SeedStream,
    SessionCipher,
    SymbolicKey,
    check_stability,
    compose,
    dh_shares,
    eta,
    key_inverse,
    key_product,
    message_cap,
    power,
    replay,
    schubert_dimension,
    session_pair,
    simulate,
    stable_family_member,
    stable_group_element,
    word_degree_estimate,
)

__version__ = "0.1.0"
