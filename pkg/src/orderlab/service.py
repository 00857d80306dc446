"""HTTP front end over the command handlers.

Run with ``uvicorn orderlab.service:app``.  Each command is a POST route
taking the matching request model; the status code carries the exit code
(200 ok, 409 inconclusive, 400 error) and the body is the command's JSON.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from . import __version__
from .handlers import COMMANDS, ERROR, INCONCLUSIVE, OK, run

STATUS = {OK: 200, INCONCLUSIVE: 409, ERROR: 400}
CODES = {v: k for k, v in STATUS.items()}

app = FastAPI(title="orderlab", version=__version__)


def route_path(command: str) -> str:
    return "/" + command.replace(" ", "/")


def _register(command: str, model) -> None:
    def endpoint(req) -> JSONResponse:
        out = run(command, req)
        return JSONResponse(out.payload, status_code=STATUS[out.code])

    # set by hand: postponed annotations would leave FastAPI a bare string
    endpoint.__annotations__ = {"req": model, "return": JSONResponse}
    endpoint.__name__ = command.replace(" ", "_").replace("-", "_")
    app.post(route_path(command), name=command)(endpoint)


for _command, (_model, _) in COMMANDS.items():
    _register(_command, _model)


@app.exception_handler(RequestValidationError)
def _invalid(request: Request, exc: RequestValidationError) -> JSONResponse:
    detail = [{k: v for k, v in e.items() if k in ("loc", "msg", "type")} for e in exc.errors()]
    return JSONResponse({"error": "invalid input", "detail": detail}, status_code=STATUS[ERROR])


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__, "commands": sorted(COMMANDS)}
