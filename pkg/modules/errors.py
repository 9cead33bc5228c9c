"""
Exception types raised by the QSTS simulator
"""


class QstsError(Exception):
    """Base class for every error raised by the simulator"""


class StateError(QstsError, ValueError):
    """Invalid register, amplitudes, measurement family or register size"""


class ProtocolError(QstsError, ValueError):
    """Invalid protocol configuration or a party acting outside its role"""


class ChannelAbort(QstsError):
    """A decoy check rejected the quantum channel

    Carries both decoy reports so the caller can still record them.
    """

    def __init__(self, reports):
        self.reports = tuple(reports)
        failed = [r.sequence for r in self.reports if not r.accepted]
        super().__init__(f"decoy check aborted on sequence(s) {failed}")


class AuditError(QstsError):
    """Transcript resource counts disagree with the efficiency formulas"""
