import util as u
from util import other as renamed

u.func()
renamed()
