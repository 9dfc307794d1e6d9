from .containers import Image, Sinogram, SamplerSpec  # noqa: F401
from .sampling import downsample, upsample  # noqa: F401
from .metrics import psnr, ssim  # noqa: F401
