# src/utils/error_handler.py

"""
Erreurs du domaine et gestionnaire de messages utilisateur conviviaux.

Chaque erreur appartient à une catégorie qui détermine le code de sortie
de la ligne de commande :
    1 : paramètres invalides / usage
    2 : entrées-sorties (fichiers, manifeste)
    3 : perte de données, réparation impossible, échec de vérification
"""

from typing import Tuple

from loguru import logger


EXIT_OK = 0
EXIT_PARAMETER = 1
EXIT_IO = 2
EXIT_DATA_LOSS = 3


class ExactRegenError(Exception):
    """Classe de base de toutes les erreurs du projet."""

    exit_code = EXIT_PARAMETER


# --- Paramètres (code 1) ---------------------------------------------------

class ParameterError(ExactRegenError, ValueError):
    """Paramètres de code ou d'appel invalides."""


class FieldMismatchError(ParameterError):
    """Opération entre éléments de corps différents."""


class FieldTooSmallError(ParameterError):
    """Le corps choisi est trop petit pour la construction demandée."""


class ZeroDivisionFieldError(ExactRegenError, ZeroDivisionError):
    """Inversion de l'élément nul."""


class DimensionMismatchError(ParameterError):
    """Formes de matrices ou dimensions ambiantes incompatibles."""


class SingularMatrixError(ParameterError):
    """Matrice non inversible là où une inversion est requise."""


class DuplicateNodeError(ParameterError):
    """Le même nœud apparaît plusieurs fois dans une requête."""


class MissingHelperError(ParameterError):
    """Un nœud assistant attendu pour la régénération est absent."""


class UnsupportedOperationError(ParameterError):
    """Opération non prise en charge par cette famille de codes."""


class CodeFileFormatError(ParameterError):
    """Description textuelle de code mal formée."""


# --- Entrées-sorties (code 2) ----------------------------------------------

class StorageIOError(ExactRegenError, OSError):
    """Lecture ou écriture impossible dans le répertoire du cluster."""

    exit_code = EXIT_IO


class ManifestError(StorageIOError):
    """Manifeste absent, illisible ou incohérent."""


# --- Perte de données / vérification (code 3) -------------------------------

class DataLossError(ExactRegenError):
    """Moins de k nœuds vivants : une partie des données est perdue."""

    exit_code = EXIT_DATA_LOSS


class RepairImpossibleError(ExactRegenError):
    """Moins de d nœuds vivants : la régénération est refusée."""

    exit_code = EXIT_DATA_LOSS


class CorruptionError(ExactRegenError):
    """Des symboles dupliqués ne concordent pas."""

    exit_code = EXIT_DATA_LOSS


class ZeroDeltaError(ExactRegenError):
    """Un coefficient delta nul : la famille principale n'est plus MDS."""

    exit_code = EXIT_DATA_LOSS


class VerificationError(ExactRegenError):
    """Au moins une vérification de sous-espaces a échoué."""

    exit_code = EXIT_DATA_LOSS


class UserFriendlyErrorHandler:
    """Convertit les erreurs techniques en messages utilisateur clairs."""

    @staticmethod
    def exit_code_for(exception: BaseException) -> int:
        """
        Détermine le code de sortie associé à une exception.

        Args:
                exception: Exception levée pendant la commande

        Returns:
                int: 1 (paramètres), 2 (entrées-sorties) ou 3 (perte de données)
        """
        if isinstance(exception, ExactRegenError):
            return exception.exit_code
        if isinstance(exception, OSError):
            return EXIT_IO
        return EXIT_PARAMETER

    @staticmethod
    def handle_code_error(exception: Exception, operation: str = "") -> Tuple[str, str]:
        """
        Gère les erreurs de codage et retourne un message utilisateur.

        Args:
                exception: Exception technique
                operation: Description de l'opération en cours

        Returns:
                Tuple[str, str]: (titre_erreur, message_detaille)
        """
        logger.debug(f"Traduction de l'erreur {type(exception).__name__}: {exception}")

        if isinstance(exception, DataLossError):
            return (
                "Données perdues",
                f"Trop peu de nœuds vivants pour reconstruire le fichier.\n\n"
                f"Détails : {exception}\n\n"
                f"Solutions :\n"
                f"• Restaurez des nœuds depuis une sauvegarde\n"
                f"• Vérifiez qu'au moins k nœuds sont présents",
            )

        if isinstance(exception, RepairImpossibleError):
            return (
                "Réparation impossible",
                f"Il faut au moins d nœuds assistants vivants.\n\n"
                f"Détails : {exception}\n\n"
                f"Solutions :\n"
                f"• Récupérez d'abord les données avec 'reconstruct'\n"
                f"• Ré-encodez le fichier sur un nouveau cluster",
            )

        if isinstance(exception, CorruptionError):
            return (
                "Données corrompues",
                f"Des copies d'un même symbole ne concordent pas.\n\n"
                f"Détails : {exception}\n\n"
                f"Solutions :\n"
                f"• Lancez 'verify' pour localiser le nœud fautif\n"
                f"• Supprimez ce nœud puis réparez-le",
            )

        if isinstance(exception, VerificationError):
            return (
                "Vérification échouée",
                f"Le code ne satisfait pas les conditions attendues.\n\n"
                f"Détails : {exception}",
            )

        if isinstance(exception, FieldTooSmallError):
            return (
                "Corps trop petit",
                f"Le corps fini choisi ne permet pas cette construction.\n\n"
                f"Détails : {exception}\n\n"
                f"Solutions :\n"
                f"• Omettez --field pour la sélection automatique\n"
                f"• Choisissez un corps d'ordre plus grand (ex: gf2:8)",
            )

        if isinstance(exception, ParameterError):
            return (
                "Paramètres invalides",
                f"Les paramètres fournis ne sont pas valides.\n\n"
                f"Détails : {exception}",
            )

        # Erreur générique
        return (
            f"Erreur lors de {operation}" if operation else "Erreur de codage",
            f"Une erreur technique s'est produite.\n\n"
            f"Détails : {str(exception)}",
        )

    @staticmethod
    def handle_file_error(exception: Exception, file_path: str = "") -> Tuple[str, str]:
        """
        Gère les erreurs de fichiers/dossiers.

        Args:
                exception: Exception technique
                file_path: Chemin du fichier concerné

        Returns:
                Tuple[str, str]: (titre_erreur, message_detaille)
        """
        error_str = str(exception).lower()

        if isinstance(exception, ManifestError):
            return (
                "Manifeste invalide",
                f"Le manifeste du cluster est absent ou incohérent.\n\n"
                f"Chemin : {file_path}\n"
                f"Détails : {exception}",
            )

        if "permission denied" in error_str or "access is denied" in error_str:
            return (
                "Accès au fichier refusé",
                f"Impossible d'accéder au fichier.\n\n"
                f"Chemin : {file_path}\n\n"
                f"Solutions :\n"
                f"• Vérifiez que le dossier n'est pas en lecture seule\n"
                f"• Fermez les applications qui utilisent ce dossier",
            )

        if "no space left" in error_str:
            return (
                "Espace disque insuffisant",
                f"Plus d'espace disponible sur le disque.\n\n"
                f"Solutions :\n"
                f"• Libérez de l'espace disque\n"
                f"• Choisissez un autre emplacement",
            )

        not_found = isinstance(exception, FileNotFoundError) or isinstance(exception.__cause__, FileNotFoundError)
        if not_found or "not found" in error_str:
            return (
                "Fichier introuvable",
                f"Le fichier ou dossier spécifié n'existe pas.\n\n"
                f"Chemin : {file_path}\n\n"
                f"Solutions :\n"
                f"• Vérifiez que le chemin est correct",
            )

        # Erreur générique
        return (
            "Erreur de fichier",
            f"Impossible de créer ou d'accéder au fichier.\n\n"
            f"Détails : {str(exception)}\n"
            f"Chemin : {file_path}",
        )
