"""Generator and discriminator for 32x32 grayscale shape images.

The discriminator owns two heads over one shared convolutional trunk: an
adversarial real/fake logit and a recognition head that reconstructs the
continuous latent codes (plus categorical logits when a categorical code
is configured) from an image.
"""

import torch
from torch import nn

__all__ = ["Generator", "Discriminator", "init_weights"]


def init_weights(module: nn.Module) -> None:
    if isinstance(module, (nn.Conv2d, nn.ConvTranspose2d, nn.Linear)):
        nn.init.normal_(module.weight, 0.0, 0.02)
        if module.bias is not None:
            nn.init.zeros_(module.bias)
    elif isinstance(module, (nn.BatchNorm1d, nn.BatchNorm2d)):
        nn.init.normal_(module.weight, 1.0, 0.02)
        nn.init.zeros_(module.bias)


class Generator(nn.Module):
    def __init__(self, noise_dim: int, code_dim: int, side: int = 32):
        super().__init__()
        if side % 8 != 0:
            raise ValueError("side must be divisible by 8")
        self.side = side
        self.base = side // 8
        self.fc = nn.Sequential(
            nn.Linear(noise_dim + code_dim, 128 * self.base * self.base),
            nn.BatchNorm1d(128 * self.base * self.base),
            nn.ReLU(inplace=True),
        )
        self.deconv = nn.Sequential(
            nn.ConvTranspose2d(128, 64, 4, 2, 1),
            nn.BatchNorm2d(64),
            nn.ReLU(inplace=True),
            nn.ConvTranspose2d(64, 32, 4, 2, 1),
            nn.BatchNorm2d(32),
            nn.ReLU(inplace=True),
            nn.ConvTranspose2d(32, 1, 4, 2, 1),
            nn.Sigmoid(),
        )
        self.apply(init_weights)

    def forward(self, noise: torch.Tensor, codes: torch.Tensor) -> torch.Tensor:
        h = self.fc(torch.cat([noise, codes], dim=1))
        h = h.view(-1, 128, self.base, self.base)
        return self.deconv(h)


class Discriminator(nn.Module):
    def __init__(self, n_latent: int, n_categorical: int = 0, side: int = 32):
        super().__init__()
        if side % 8 != 0:
            raise ValueError("side must be divisible by 8")
        self.n_latent = n_latent
        self.n_categorical = n_categorical
        feat = 128 * (side // 8) * (side // 8)
        self.trunk = nn.Sequential(
            nn.Conv2d(1, 32, 4, 2, 1),
            nn.LeakyReLU(0.2, inplace=True),
            nn.Conv2d(32, 64, 4, 2, 1),
            nn.BatchNorm2d(64),
            nn.LeakyReLU(0.2, inplace=True),
            nn.Conv2d(64, 128, 4, 2, 1),
            nn.BatchNorm2d(128),
            nn.LeakyReLU(0.2, inplace=True),
            nn.Flatten(),
        )
        self.adv_head = nn.Linear(feat, 1)
        self.q_head = nn.Sequential(
            nn.Linear(feat, 128),
            nn.LeakyReLU(0.2, inplace=True),
            nn.Linear(128, n_latent + n_categorical),
        )
        self.apply(init_weights)

    def forward(self, images: torch.Tensor):
        features = self.trunk(images)
        return self.adv_head(features).squeeze(1), self.q_head(features)

    def codes(self, images: torch.Tensor) -> torch.Tensor:
        """Continuous code reconstruction only (categorical logits dropped)."""
        _, q = self.forward(images)
        return q[:, : self.n_latent]
