"""
FastAPI backend for the stack-sorting bijection toolkit.
Provides REST API endpoints for mapping, sorting, statistics and verification.
"""

from typing import Any, Dict, List, Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from stacksort_bijection import __version__
from stacksort_bijection.core import perm_core as pc
from stacksort_bijection.core.enumerate_verify import VerifyReport, verify_suite
from stacksort_bijection.core.perm_core import parse_permutation
from stacksort_bijection.core.upsilon import upsilon_inverse_trace, upsilon_trace
from stacksort_bijection.utils.config import get_settings
from stacksort_bijection.utils.logger import get_logger

logger = get_logger(__name__)

# Initialize FastAPI app
app = FastAPI(
    title="Stack-Sorting Bijection API",
    description="Sort-depth preserving bijection between 321- and 213-avoiding permutations",
    version=__version__,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# Pydantic models
class PermutationRequest(BaseModel):
    permutation: str


class MapRequest(PermutationRequest):
    inverse: bool = False
    step: Optional[str] = None


class SortResponse(BaseModel):
    input: str
    iterates: List[str]
    sort_depth: int


class VerifyRequest(BaseModel):
    n_max: int = Field(default=5, ge=1)
    t_max: Optional[int] = Field(default=None, ge=0)
    only: Optional[List[str]] = None


@app.get("/")
async def root():
    """
    Root endpoint.
    """
    return {
        "message": "Stack-Sorting Bijection API",
        "version": __version__,
        "status": "running"
    }


@app.get("/health")
async def health_check():
    """
    Health check endpoint.
    """
    return {
        "status": "healthy",
        "api_max_n": get_settings().api_max_n,
    }


@app.post("/map")
async def map_permutation(request: MapRequest) -> Dict[str, Any]:
    """
    Apply Upsilon (or its inverse) and return the full trace, or the
    object produced by a single step.
    """
    try:
        perm = parse_permutation(request.permutation)
        trace = upsilon_inverse_trace(perm) if request.inverse else upsilon_trace(perm)
        if request.step:
            return {"input": str(perm), "step": request.step, "output": trace.stage(request.step)}
        return trace.to_dict()
    except ValueError as e:
        logger.error(f"Error mapping {request.permutation!r}: {str(e)}")
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"Unexpected error in /map: {str(e)}")
        raise HTTPException(status_code=500, detail=str(e))


@app.post("/sort", response_model=SortResponse)
async def sort_permutation(request: PermutationRequest):
    try:
        perm = parse_permutation(request.permutation)
        iterates = pc.sort_iterates(perm)[1:]
        return SortResponse(input=str(perm), iterates=[str(p) for p in iterates],
                            sort_depth=len(iterates))
    except ValueError as e:
        logger.error(f"Error sorting {request.permutation!r}: {str(e)}")
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"Unexpected error in /sort: {str(e)}")
        raise HTTPException(status_code=500, detail=str(e))


@app.post("/stats")
async def permutation_stats(request: PermutationRequest) -> Dict[str, int]:
    try:
        return pc.stats_summary(parse_permutation(request.permutation))
    except ValueError as e:
        logger.error(f"Error computing statistics for {request.permutation!r}: {str(e)}")
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"Unexpected error in /stats: {str(e)}")
        raise HTTPException(status_code=500, detail=str(e))


@app.post("/verify", response_model=VerifyReport)
async def verify(request: VerifyRequest):
    """
    Run the verification suite at a small size.

    n_max is capped by STACKSORT_API_MAX_N; larger runs belong to the CLI.
    """
    settings = get_settings()
    if request.n_max > settings.api_max_n:
        raise HTTPException(
            status_code=400,
            detail=f"n_max {request.n_max} exceeds the API limit {settings.api_max_n}"
        )
    try:
        logger.info(f"Verifying up to n={request.n_max}")
        return verify_suite(n_max=request.n_max, t_max=request.t_max, only=request.only)
    except ValueError as e:
        logger.error(f"Error running verification: {str(e)}")
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"Unexpected error in /verify: {str(e)}")
        raise HTTPException(status_code=500, detail=str(e))


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=get_settings().port)
