"""Time-unit bookkeeping between atomic units and nanoseconds.

All internal physics runs in atomic units (hbar = m_e = e = 1); nanoseconds
appear only at the I/O boundaries.  The conversion constant is the CODATA
atomic unit of time.
"""

from __future__ import annotations

# CODATA atomic unit of time, in seconds.
AU_TIME_S = 2.4188843265857e-17

# Nanoseconds per atomic time unit.
NS_PER_AU = AU_TIME_S / 1e-9


def au_to_ns(t_au):
    """Convert a time (scalar or array) from atomic units to nanoseconds."""
    return t_au * NS_PER_AU


def ns_to_au(t_ns):
    """Convert a time (scalar or array) from nanoseconds to atomic units."""
    return t_ns / NS_PER_AU
