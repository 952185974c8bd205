__all__ = ['overlapEstimation', 'convolutionPipeline', 'training']
