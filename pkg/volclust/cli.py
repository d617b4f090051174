#!/usr/bin/env python3
"""
CLI de volclust - Interface en ligne de commande.
"""

import argparse
import logging
import sys
from pathlib import Path

from .config import EXPERIMENTS, OUTDIR_ENV, build_config, template_document
from .core import run_analysis
from .errors import ConfigError, OutputError
from .logging_config import init_logging

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_CONFIG = 2


def _pct_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"liste de pourcentages attendue: {text!r}") from None


def _name_list(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def _setup_logging(args):
    """
    Console: INFO par défaut, DEBUG avec -v, WARNING avec -q.

    Returns:
        Tuple (logger, handler fichier ou None)
    """
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    else:
        level = logging.INFO
    log = init_logging(level=level)
    handler = log.add_file_handler(Path(args.log_file)) if args.log_file else None
    return log, handler


def cmd_analyze(args):
    """Lance une analyse et écrit les artefacts."""
    log, handler = _setup_logging(args)
    try:
        _analyze(args)
    finally:
        if handler is not None:
            log.remove_handler(handler)


def _analyze(args):
    overrides = {
        "inputs": args.input,
        "tau": args.tau,
        "p_list": args.p,
        "n_max": args.n_max,
        "max_lag": args.max_lag,
        "bins": args.bins,
        "seed": args.seed,
        "experiments": args.experiment,
        "outdir": args.outdir,
        "window": args.window,
        "workers": args.workers,
        "overwrite": True if args.overwrite else None,
        "run_id": args.run_id,
    }

    try:
        cfg = build_config(args.config, overrides)
        manifest = run_analysis(cfg)
    except (ConfigError, OutputError) as e:
        print(f"✗ {e}", file=sys.stderr)
        sys.exit(EXIT_CONFIG)

    print(f"✓ Analyse '{manifest.run_id}' terminée: {len(manifest.artifacts)} artefact(s)")
    print(f"✓ Manifeste: {manifest.run_dir / 'manifest.json'}")

    if manifest.failures:
        for failure in manifest.failures:
            print(
                f"✗ {failure.symbol}/{failure.experiment}: {failure.error}: {failure.message}",
                file=sys.stderr,
            )
        print(f"⚠ {len(manifest.failures)} cellule(s) en échec", file=sys.stderr)
        sys.exit(EXIT_PARTIAL)


def cmd_template(args):
    """Affiche (ou sauvegarde) une configuration de reproduction complète."""
    content = template_document()

    if args.output:
        output_path = Path(args.output)
        try:
            output_path.parent.mkdir(parents=True, exist_ok=True)
            output_path.write_text(content, encoding="utf-8")
        except OSError as e:
            print(f"✗ Impossible d'écrire {output_path}: {e}", file=sys.stderr)
            sys.exit(EXIT_CONFIG)
        print(f"✓ Configuration sauvegardée: {output_path}")
    else:
        print(content, end="")


def main():
    parser = argparse.ArgumentParser(
        prog="volclust",
        description="Analyse du regroupement de volatilité des séries financières"
    )

    subparsers = parser.add_subparsers(dest="command", help="Commandes disponibles")

    # analyze (commande principale)
    analyze_parser = subparsers.add_parser("analyze", help="Lancer une analyse")
    analyze_parser.add_argument(
        "--input", "-i",
        action="append",
        metavar="SYMBOL=PATH",
        help="Série de cours à analyser (répétable)"
    )
    analyze_parser.add_argument("--config", "-c", help="Fichier de configuration JSON")
    analyze_parser.add_argument("--tau", type=int, help="Horizon des rendements en jours (défaut: 1)")
    analyze_parser.add_argument(
        "--p",
        type=_pct_list,
        help="Pourcentages d'extrêmes, ex: 5,10,15,20,30"
    )
    analyze_parser.add_argument("--n-max", type=int, help="Fenêtre maximale de l'indice (défaut: 240)")
    analyze_parser.add_argument("--max-lag", type=int, help="Décalage maximal de l'autocorrélation (défaut: 100)")
    analyze_parser.add_argument("--bins", type=int, help="Nombre de classes de l'histogramme (défaut: 50)")
    analyze_parser.add_argument("--seed", type=int, help="Graine maîtresse (défaut: 0)")
    analyze_parser.add_argument(
        "--experiment", "-e",
        type=_name_list,
        help=f"Expériences: {', '.join(EXPERIMENTS)} ou all"
    )
    analyze_parser.add_argument(
        "--outdir", "-o",
        help=f"Dossier de sortie (défaut: ${OUTDIR_ENV} ou results)"
    )
    analyze_parser.add_argument("--window", type=int, help="Fenêtre de la distribution des comptes (défaut: 10)")
    analyze_parser.add_argument("--workers", type=int, help="Nombre de cellules en parallèle (défaut: 1)")
    analyze_parser.add_argument("--run-id", help="Identifiant d'exécution (défaut: empreinte)")
    analyze_parser.add_argument("--overwrite", action="store_true", help="Remplacer une exécution existante")
    analyze_parser.add_argument("--log-file", help="Journal JSON (une ligne par événement)")
    analyze_parser.add_argument("--verbose", "-v", action="store_true", help="Journal détaillé")
    analyze_parser.add_argument("--quiet", "-q", action="store_true", help="Avertissements et erreurs seulement")
    analyze_parser.set_defaults(func=cmd_analyze)

    # template
    template_parser = subparsers.add_parser("template", help="Afficher une configuration de reproduction")
    template_parser.add_argument("--output", "-o", help="Sauvegarder dans un fichier")
    template_parser.set_defaults(func=cmd_template)

    # Parsing
    args = parser.parse_args()

    if args.command is None:
        parser.print_help()
        sys.exit(EXIT_OK)

    args.func(args)


if __name__ == "__main__":
    main()
