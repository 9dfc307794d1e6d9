from skunroll.common.exceptions import SkunrollException, ParameterException, TerminalException


class SolverException(SkunrollException):
    def __init__(self, msg: str) -> None:
        super().__init__(msg)


class SolverParameterException(ParameterException, SolverException):
    pass


class SolverDivergenceException(SolverException, TerminalException):
    def __init__(self, solver: str, iteration: int) -> None:
        self.solver = solver
        self.iteration = iteration
        super().__init__(f"{solver} produced non finite iterates at iteration {iteration}, check the step sizes")
