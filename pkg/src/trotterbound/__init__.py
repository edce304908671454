"""Exact Trotter step bounds for Hubbard and t-J lattice Hamiltonians."""
