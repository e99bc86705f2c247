"""Exception hierarchy shared by every module."""


class DcatError(Exception):
    """Base class for all controlled errors."""

    code = "error"

    def to_dict(self):
        return {"error": self.code, "message": str(self)}


class DanglingId(DcatError):
    code = "DanglingId"


class CodomainMismatch(DcatError):
    code = "CodomainMismatch"


class FrameMismatch(DcatError):
    code = "FrameMismatch"


class LawViolation(DcatError):
    code = "LawViolation"

    def __init__(self, report):
        self.report = report
        first = report.violations[0] if report.violations else None
        msg = f"{report.subject}: {len(report.violations)} violation(s)"
        if first is not None:
            msg += f", first {first.axiom} at {first.instance!r}"
        super().__init__(msg)


class NotStrict(DcatError):
    code = "NotStrict"


class NotThin(DcatError):
    code = "NotThin"


class NotFramed(DcatError):
    code = "NotFramed"


class Ambiguous(DcatError):
    code = "Ambiguous"


class SizeBoundExceeded(DcatError):
    code = "SizeBoundExceeded"

    def __init__(self, what, size, bound):
        self.what, self.size, self.bound = what, size, bound
        super().__init__(f"{what} has size {size}, bound is {bound}")


class EnumerationBound(SizeBoundExceeded):
    code = "EnumerationBound"


class InvalidInput(DcatError):
    code = "InvalidInput"

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class DslError(DcatError):
    """A problem in ``.dcat`` source, located at ``line``:``col`` (1-based)."""

    code = "DslError"

    def __init__(self, message, line, col):
        self.line, self.col = line, col
        super().__init__(f"{line}:{col}: {message}")

    def to_dict(self):
        return {"error": self.code, "message": str(self), "line": self.line, "column": self.col}


class DslSyntaxError(DslError):
    code = "SyntaxError"

    def __init__(self, line, col, expected, found=""):
        self.expected = frozenset(expected)
        shown = ", ".join(sorted(self.expected))
        super().__init__(f"expected one of {{{shown}}}, found {found!r}", line, col)

    def to_dict(self):
        d = super().to_dict()
        d["expected"] = sorted(self.expected)
        return d


class DuplicateId(DslError):
    code = "DuplicateId"


class UnknownReference(DslError):
    code = "UnknownReference"
