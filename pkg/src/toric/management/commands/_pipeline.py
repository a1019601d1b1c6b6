"""Shared plumbing for the toric management commands."""

from __future__ import annotations
import logging

from django.core.management.base import BaseCommand, CommandError

from toric.documents import ComplexDocument, dumps, read_document
from toric.exceptions import InvalidComplex, ToricError
from toric.logpair import Boundary, make_boundary, toric_boundary_minus_conductor
from toric.mcomplex import MonoidalComplex

logger = logging.getLogger(__name__)


class PipelineCommand(BaseCommand):
    """
    Reads a complex document, runs ``run`` and prints its JSON report.
    Library errors become CommandError with the error's exit code.
    """

    def add_arguments(self, parser):
        parser.add_argument("path", help="complex document (JSON)")
        parser.add_argument("--char", type=int, default=None, help="override the characteristic (0 or a prime)")
        parser.add_argument("--box", type=int, default=None, help="verification box for generator mode")

    def handle(self, *args, **options):
        try:
            document = read_document(options["path"])
            mc = document.build(options["char"])
            data = self.run(document, mc, options)
        except InvalidComplex as exc:
            self.stderr.write("\n".join(f"{v.code}: {v.message}" for v in exc.violations))
            raise CommandError(exc.message, returncode=exc.exit_code) from exc
        except ToricError as exc:
            logger.info("%s failed: %s", self.__class__.__module__, exc.message)
            raise CommandError(exc.message or exc.__class__.__name__, returncode=exc.exit_code) from exc
        self.stdout.write(dumps(data), ending="")

    def run(self, document: ComplexDocument, mc: MonoidalComplex, options: dict) -> dict:
        raise NotImplementedError

    def boundary(self, document: ComplexDocument, mc: MonoidalComplex, options: dict) -> Boundary:
        if options.get("reduced_boundary"):
            return toric_boundary_minus_conductor(mc.as_lattice_family())
        return make_boundary(mc.as_lattice_family(), document.boundary)


def add_r_argument(parser):
    parser.add_argument("--r", type=int, default=None, help="even index r of the pluricanonical forms")


def add_reduced_boundary_argument(parser):
    parser.add_argument(
        "--reduced-boundary", action="store_true",
        help="ignore the document's boundary and use the toric boundary minus the conductor",
    )
