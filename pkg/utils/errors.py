"""Exception hierarchy shared by the analyzers and the command line"""

import config


class SchemeGaugeError(Exception):
    """Base class; exit_code is what the command line returns"""

    exit_code = 1

    def __init__(self, key, **fields):
        self.key = key
        self.fields = fields
        super().__init__(config.ERROR_MESSAGES[key].format(**fields))


class InputError(SchemeGaugeError):
    exit_code = 2


class ParseError(InputError):
    """Malformed graph6 or DIMACS input; carries offset or line when known"""

    @property
    def offset(self):
        return self.fields.get('offset')

    @property
    def line(self):
        return self.fields.get('line')


class GraphError(InputError):
    pass


class OracleSizeError(InputError):
    pass


class NumericalError(SchemeGaugeError):
    exit_code = 1


class NotPSDError(NumericalError):
    pass


class NotCoherentError(NumericalError):
    pass


class LinearProgramError(NumericalError):
    pass


class SchemeError(NumericalError):
    pass
