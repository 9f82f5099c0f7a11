"""
Utilitaires de validation : paramètres de code, spécifications de corps,
listes de nœuds et noms de fichiers produits.
"""

from typing import List, Optional, Tuple

from src.core.field import FieldSpec


class ParameterValidator:
    """Validation des paramètres saisis en ligne de commande."""

    CODES = ("mbr", "msr")

    @classmethod
    def validate_code_params(cls, code: str, n: int, k: int) -> Tuple[bool, str]:
        """
        Vérifie les contraintes de (n, k) pour une famille de code.

        Args:
                code: "mbr" ou "msr"
                n: Nombre de nœuds
                k: Nombre de nœuds de reconstruction

        Returns:
                Tuple[bool, str]: (est_valide, message_erreur)
        """
        if code not in cls.CODES:
            return False, f"Code inconnu '{code}' (attendu : {', '.join(cls.CODES)})"
        if k < 1:
            return False, "k doit être au moins 1"

        if code == "mbr":
            # d = n - 1 implicite
            if n <= k:
                return False, f"MBR : n={n} doit dépasser k={k}"
            if n * (n - 1) // 2 > 65536:
                return False, f"MBR : n={n} demande plus de 65536 vecteurs MDS"
        else:
            # d = k + 1 implicite, il faut d assistants après une défaillance
            if n < k + 2:
                return False, f"MSR : n={n} doit valoir au moins k + 2 = {k + 2}"
            if n > 65536:
                return False, f"MSR : n={n} dépasse le plus grand corps pris en charge"

        return True, ""

    @classmethod
    def validate_field_spec(cls, text: Optional[str], min_order: int = 2) -> Tuple[bool, str]:
        """Vérifie `prime:<p>` / `gf2:<m>` et l'ordre minimal requis."""
        if not text:
            return True, ""
        try:
            field = FieldSpec.parse(text)
        except ValueError as e:
            return False, str(e)
        if field.order < min_order:
            return False, f"Le corps {field} a {field.order} éléments, {min_order} requis"
        return True, ""

    @classmethod
    def parse_node_list(cls, text: str, n: int) -> Tuple[Optional[List[int]], str]:
        """
        Analyse une liste `1,2,3`.

        Returns:
                Tuple[Optional[List[int]], str]: (identifiants, message_erreur)
        """
        if not text or not text.strip():
            return None, "Liste de nœuds vide"
        try:
            nodes = [int(part) for part in text.split(",") if part.strip()]
        except ValueError:
            return None, f"Liste de nœuds invalide : '{text}'"
        if len(set(nodes)) != len(nodes):
            return None, f"Nœuds dupliqués dans '{text}'"
        outside = [i for i in nodes if not 1 <= i <= n]
        if outside:
            return None, f"Nœuds hors de 1..{n} : {outside}"
        return nodes, ""

    @classmethod
    def suggest_parameters(cls, code: str, n: int, k: int) -> Tuple[int, int]:
        """
        Propose le couple (n, k) valide le plus proche.

        Args:
                code: "mbr" ou "msr"
                n: Nombre de nœuds demandé
                k: k demandé

        Returns:
                Tuple[int, int]: (n, k) corrigés
        """
        k = max(1, k)
        if code == "msr":
            return max(n, k + 2), k
        return max(n, k + 1), k


class FilenameValidator:
    """Validation des noms de fichiers et de dossiers de cluster."""

    FORBIDDEN_CHARS = '<>:"/\\|?*'

    RESERVED_NAMES = {"CON", "PRN", "AUX", "NUL"} | {f"COM{i}" for i in range(1, 10)} | {
        f"LPT{i}" for i in range(1, 10)
    }

    MAX_LENGTH = 200

    @classmethod
    def validate(cls, name: str) -> Tuple[bool, str]:
        """
        Valide un nom de fichier ou de dossier (sans chemin).

        Returns:
                Tuple[bool, str]: (est_valide, message_erreur)
        """
        if not name or not name.strip():
            return False, "Le nom ne peut pas être vide"
        if name != name.strip():
            return False, "Le nom ne peut pas commencer ou finir par des espaces"

        forbidden_found = [char for char in cls.FORBIDDEN_CHARS if char in name]
        if forbidden_found:
            return False, f"Caractères interdits trouvés : {', '.join(forbidden_found)}"
        if len(name) > cls.MAX_LENGTH:
            return False, f"Le nom est trop long (max {cls.MAX_LENGTH} caractères)"
        if name.upper().split(".")[0] in cls.RESERVED_NAMES:
            return False, f"'{name}' utilise un nom réservé"
        if name.endswith("."):
            return False, "Le nom ne peut pas finir par un point"
        if any(ord(char) < 32 for char in name):
            return False, "Le nom contient des caractères de contrôle invalides"
        return True, ""

    @classmethod
    def suggest_fix(cls, name: str) -> str:
        """Version corrigée du nom, `cluster` si rien n'est récupérable."""
        fixed = "".join(char for char in (name or "").strip() if ord(char) >= 32)
        for char in cls.FORBIDDEN_CHARS:
            fixed = fixed.replace(char, "_")
        fixed = fixed[:cls.MAX_LENGTH].rstrip(". ")
        if fixed.upper() in cls.RESERVED_NAMES:
            fixed = f"{fixed}_cluster"
        return fixed or "cluster"
