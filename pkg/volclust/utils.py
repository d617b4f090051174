"""
Utilitaires fichiers pour volclust (empreintes, noms d'artefacts, dossiers).
"""

import hashlib
import re
from pathlib import Path
from typing import Union


def ensure_directory(path: Path) -> Path:
    """Crée un répertoire s'il n'existe pas et retourne le chemin."""
    path.mkdir(parents=True, exist_ok=True)
    return path


def slugify(text: str) -> str:
    """Convertit un symbole (ex: 'S&P500', 'USD/NTD') en nom de fichier."""
    text = re.sub(r"[^\w\s-]", "", text.lower())
    text = re.sub(r"[\s-]+", "_", text)
    return text.strip("_") or "series"


def bytes_digest(data: bytes) -> str:
    """Empreinte SHA-256 (hex) d'un contenu."""
    return hashlib.sha256(data).hexdigest()


def file_digest(path: Union[str, Path]) -> str:
    """Empreinte SHA-256 (hex) d'un fichier, lu par blocs."""
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()
