"""LG/CY genus-one correspondence verification engine."""
