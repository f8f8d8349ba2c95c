import logging
from typing import List, Optional

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from app.config.config import settings
from app.middleware.exception import exception_message
from app.middleware.logger import setup_logger
from app.services import analysis
from app.services.bench import flop_estimate
from app.services.greedy import Algorithm, GreedyConfig, run
from app.services.linalg import SensingMatrix

setup_logger()
app = FastAPI(title="m2ols", debug=settings.DEBUG)

# CORS middleware setup to allow requests from specified origins
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.ALLOWED_ORIGINS,
    allow_credentials=True,
    allow_methods=['*'],
    allow_headers=['*']
)


class MatrixBody(BaseModel):
    matrix: List[List[float]] = Field(..., description="Row-major m x n entries")
    normalize: bool = False

    def sensing_matrix(self) -> SensingMatrix:
        return SensingMatrix.from_raw(self.matrix) if self.normalize else SensingMatrix(self.matrix)


class RecoverRequest(MatrixBody):
    y: List[float]
    algorithm: Algorithm = Algorithm.M2OLS
    K: int
    N: Optional[int] = None
    L: Optional[int] = None
    epsilon: float = settings.GREEDY_EPSILON
    true_support: Optional[List[int]] = None


class RicRequest(MatrixBody):
    order: int
    samples: Optional[int] = None
    seed: int = 0


def _fail(e: Exception, what: str):
    logging.error(f"{what} failed: {exception_message(e)}")
    status = 400 if isinstance(e, ValueError) else 500
    raise HTTPException(status_code=status, detail=exception_message(e))


@app.get("/health")
async def health():
    return {"status": "ok"}


@app.post("/api/recover")
def recover(request: RecoverRequest) -> dict:
    """
    Run one greedy recovery on the posted matrix and measurements.

    Returns:
        RecoveryResult document
    """
    try:
        A = request.sensing_matrix()
        config = GreedyConfig(
            algorithm=request.algorithm, K=request.K, N=request.N, L=request.L, epsilon=request.epsilon
        )
        result = run(A, request.y, config, true_support=request.true_support)
        logging.info(f"Recovery finished: {config.algorithm.value}, {len(result.iterations)} iterations")
        return result.to_dict()
    except Exception as e:
        _fail(e, "Recovery")


@app.post("/api/ric")
def ric(request: RicRequest) -> dict:
    """Exact RIC, or a sampled lower bound when ``samples`` is given"""
    try:
        A = request.sensing_matrix()
        if request.samples is None:
            return analysis.exact_ric(A, request.order).to_dict()
        return analysis.sampled_ric_lower_bound(A, request.order, request.samples, request.seed).to_dict()
    except Exception as e:
        _fail(e, "RIC computation")


@app.get("/api/bounds/recovery")
async def recovery_bound(K: int, N: int, L: int) -> dict:
    try:
        bound = analysis.recovery_bound(K, N, L)
        return {"bound": bound.bound, "ric_order": bound.ric_order}
    except Exception as e:
        _fail(e, "Recovery bound")


@app.get("/api/bounds/snr")
async def snr_bound(K: int, N: int, L: int, delta: float, kappa: float) -> dict:
    try:
        return {"threshold": analysis.snr_threshold(K, N, L, delta, kappa)}
    except Exception as e:
        _fail(e, "Snr threshold")


@app.get("/api/flops")
async def flops(
    algorithm: Algorithm, K: int, m: int, n: int, N: int = 1, s: Optional[int] = Query(None)
) -> dict:
    try:
        return {"flops": flop_estimate(algorithm, K, m, n, N=N, s=s)}
    except Exception as e:
        _fail(e, "Flop estimate")


if __name__ == "__main__":
    import uvicorn

    # Log startup information
    logging.info(f"Debug mode: {settings.DEBUG}")
    logging.info(f"Allowed origins: {settings.ALLOWED_ORIGINS}")

    uvicorn.run(
        "main:app",
        host=settings.HOST,
        port=settings.PORT,
        reload=settings.DEBUG,
    )
