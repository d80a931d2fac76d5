"""
Pseudospectral simulation of the 2-D Ericksen-Leslie system on a periodic
square, with energy-law diagnostics and identity checks.

Run `python -m leslie --help` for the command-line tools.
"""
