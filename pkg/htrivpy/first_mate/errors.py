'''Exception hierarchy shared by every htrivpy module.

Each exception carries a stable ``code`` used by the command line tool when
reporting on the error stream.
'''


class HTrivError(Exception):
    """!
    Base class of every error raised on purpose by htrivpy.
    """
    ## (str) Stable machine readable error code.
    code = 'htriv.error'

    def __init__(self, message, code=None):
        super().__init__(message)
        if code is not None:
            self.code = code

    def __str__(self):
        return f'error[{self.code}]: {super().__str__()}'


class DomainError(HTrivError, ValueError):
    """!
    An input is outside the domain of an operation.
    """
    code = 'domain.error'


class FanValidationError(DomainError):
    """!
    A list of vectors is not a complete two dimensional stacky fan.
    Carries the offending (0-based, input order) indices.
    """
    code = 'fan.invalid'

    def __init__(self, message, code=None, indices=()):
        super().__init__(message, code)
        ## (tuple of int, default: ()) Offending indices in input order.
        self.indices = tuple(indices)


class DimensionError(DomainError):
    code = 'lattice.unsupported_dimension'


class PicardMismatchError(DomainError):
    """!
    Classes of different Picard groups were mixed.
    """
    code = 'picard.mismatch'


class NotApplicableError(DomainError):
    code = 'classify.not_applicable'


class CertificateError(HTrivError):
    code = 'classify.certificate'


class FanFileError(HTrivError):
    """!
    A fan file could not be read or parsed; ``location`` points at the
    line/column or the offending field.
    """
    code = 'io.syntax'

    def __init__(self, message, code=None, location=''):
        super().__init__(f'{location}: {message}' if location else message, code)
        ## (str, default: '') Line/column or field path of the problem.
        self.location = location


class ReportSchemaError(HTrivError):
    code = 'io.report_schema'


class OracleDisagreementError(HTrivError):
    """!
    The feasibility and the cohomology oracles disagree on a class.
    This never happens for a correct installation.
    """
    code = 'oracle.disagreement'
