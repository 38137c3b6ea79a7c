import { serve } from './protocol.js';
import { denseEngine } from './dense.js';

serve(denseEngine);
