"""
Algebra domains: the Drinfeld-Jimbo quantum group engine (quantum/) and the
split ı quantum group identities built on it (iquantum/).
"""
