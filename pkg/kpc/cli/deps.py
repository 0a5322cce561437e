import functools
import click
from kpc.schemas import ErrorResponse
from kpc.repositories.instance_repo import InstanceRepository
from kpc.repositories.lp_repo import LPRepository
from kpc.repositories.result_repo import ResultRepository
from kpc.repositories.report_repo import ReportRepository
from kpc.services.generator_service import GeneratorService
from kpc.services.campaign_service import CampaignService
from kpc.core.errors import KPCError
from kpc.core.logging import get_logger

logger = get_logger(__name__)

EXIT_FAILURE = 1


def get_instance_repo() -> InstanceRepository:
    return InstanceRepository()


def get_lp_repo() -> LPRepository:
    return LPRepository()


def get_result_repo() -> ResultRepository:
    return ResultRepository()


def get_report_repo() -> ReportRepository:
    return ReportRepository()


def get_generator_service() -> GeneratorService:
    return GeneratorService(get_instance_repo())


def get_campaign_service() -> CampaignService:
    return CampaignService(get_instance_repo(), get_result_repo())


def fail(response: ErrorResponse) -> None:
    click.echo(response.model_dump_json(), err=True)
    raise click.exceptions.Exit(EXIT_FAILURE)


def handle_errors(func):
    """Domain and IO errors become an ErrorResponse on stderr and exit code 1"""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except KPCError as e:
            logger.error("Command failed", error=e.error, detail=e.message)
            fail(ErrorResponse(**e.to_dict()))
        except OSError as e:
            logger.error("Command failed", error="IOError", detail=str(e))
            fail(ErrorResponse(error="IOError", message=str(e)))
    return wrapper
