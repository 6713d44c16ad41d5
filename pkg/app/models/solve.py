from pydantic import BaseModel

from src.experiments import Scenario
from src.problems import GraphModel, ProblemModel
from src.sdp import SolverOptions


class SdpSolveRequest(BaseModel):
    problem: ProblemModel
    options: SolverOptions = SolverOptions()


class GraphSolveRequest(BaseModel):
    graph: GraphModel
    redundant: bool = False
    fisher: bool = False
    options: SolverOptions = SolverOptions()


class SimulateRequest(BaseModel):
    scenario: Scenario = Scenario()
