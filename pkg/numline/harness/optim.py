import numpy as np

__all__ = [
    'Adam',
]


class Adam(object):
    """
    Adam over named parameter groups, each with its own learning rate.
    Parameters are numpy arrays updated in place:

    .. code:: python

        adam = Adam({
            'encoder': (encoder.params(), 3e-5),
            'head': (head.params(), 1e-2),
        })
        adam.step({'encoder': encoder_grads, 'head': head_grads})

    """

    def __init__(self, groups, beta1=0.9, beta2=0.999, eps=1e-8):
        self.groups = groups
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.t = 0
        self.m, self.v = {}, {}
        for group, (params, _) in groups.items():
            for name, value in params.items():
                self.m[group, name] = np.zeros_like(value)
                self.v[group, name] = np.zeros_like(value)

    def step(self, grads):
        self.t += 1
        correct1 = 1 - self.beta1 ** self.t
        correct2 = 1 - self.beta2 ** self.t
        for group, (params, lr) in self.groups.items():
            for name, grad in grads.get(group, {}).items():
                key = group, name
                m, v = self.m[key], self.v[key]
                m *= self.beta1
                m += (1 - self.beta1) * grad
                v *= self.beta2
                v += (1 - self.beta2) * np.square(grad)
                params[name] -= lr * (m / correct1) / (np.sqrt(v / correct2) + self.eps)
