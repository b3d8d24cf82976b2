# Repositories package

from src.repositories.spl_repository import SplRepositoryStore, art_from_dict, art_to_dict

__all__ = ['SplRepositoryStore', 'art_from_dict', 'art_to_dict']
