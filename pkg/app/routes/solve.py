import logging
from functools import wraps
from http import HTTPStatus
from typing import Callable

from fastapi import APIRouter, HTTPException

from app.models.solve import GraphSolveRequest, SdpSolveRequest, SimulateRequest
from src.errors import CertestError, NumericalFailure
from src.experiments import fisher_report, generate_scenario, solve_instance
from src.problems import GraphModel, prune_dependent_constraints, scatter_multipliers
from src.sdp import solve_sdp

log = logging.getLogger(__name__)

router = APIRouter(tags=["Solver"])


def handle_solver_exceptions(func: Callable) -> Callable:
    """Decorator mapping toolkit and validation errors to 400 responses."""

    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (CertestError, ValueError) as e:
            raise HTTPException(status_code=HTTPStatus.BAD_REQUEST, detail=str(e))

    return wrapper


@router.post("/sdp/solve")
@handle_solver_exceptions
def sdp_solve(request: SdpSolveRequest):
    original = request.problem.to_problem()
    problem, kept = prune_dependent_constraints(
        original, tol=request.options.independence_tol
    )
    log.info(f"Solving SDP n={problem.dim} with {len(kept)} constraints")
    try:
        solution = solve_sdp(problem, request.options)
    except NumericalFailure as e:
        solution = e.best_iterate
    return {
        "status": "success",
        "kept_constraints": kept,
        "solution": solution.summary(),
        "rho": solution.rho,
        "multipliers": scatter_multipliers(
            solution.multipliers, kept, original.n_constraints
        ).tolist(),
    }


@router.post("/graphs/solve")
@handle_solver_exceptions
def graph_solve(request: GraphSolveRequest):
    graph = request.graph.to_graph()
    result = solve_instance(graph, redundant=request.redundant, options=request.options)
    response = {"status": "success", "result": result.summary()}
    if request.fisher:
        response["fisher"] = fisher_report(result).summary()
    return response


@router.post("/graphs/simulate")
@handle_solver_exceptions
def graph_simulate(request: SimulateRequest):
    graph, truth = generate_scenario(request.scenario)
    log.info(f"Simulated {request.scenario.kind.value} graph")
    return {
        "status": "success",
        "graph": GraphModel.from_graph(graph).model_dump(),
        "truth_landmarks": truth.landmarks.tolist(),
    }
