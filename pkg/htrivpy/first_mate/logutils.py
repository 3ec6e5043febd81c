'''Utility module to print and collect the progress log of a classification run.

The tracker writes comment-prefixed, optionally filled lines to a stream
(stdout by default, stderr for the command line tool so that documents on
stdout stay machine readable), can mirror them into a string and append
them to a log file.
'''

#===============================================================================
# Import
#===============================================================================
import sys
from os import path, makedirs
from time import strftime
from time import time

#===============================================================================
# Definitions
#===============================================================================


class LogTracker(object):
    '''Initialize log utility.

    Parameters
    ----------
    basestr: str, optional
        Base string to print.
    fllchar: str, optional
        Filler char for the line.
    cmmchar: str, optional
        Comment char at the beginning of the line.
    NTab: int, optional
        Number of indentation steps between comment and beginning of the string.
    ttlen: int, optional
        Maximum number of columns per line.
    strflag: bool, optional
        If True push the printed line into the log string.
    filflag: bool, optional
        If True append every printed line to log_path.
    mltplflag: bool, optional
        If False, the line is cut to ttlen; the line is split into
        multiple lines otherwise.
    log_path: str, optional
        Path to the log output file.
    stream: file-like, optional
        Where lines are printed; None means the current sys.stdout.
    quiet: bool, optional
        If True nothing is printed (string and file capture still work).

    '''

    def __init__(self, basestr:str='', fllchar:str='', cmmchar:str='#', NTab:int=0,
                 ttlen:int=100, strflag:bool=False, filflag:bool=False,
                 mltplflag:bool=False, log_path:str='log.out', stream=None,
                 quiet:bool=False):

        self.basestr = basestr
        self.fllchar = fllchar
        self.cmmchar = cmmchar
        self.NTab = NTab
        self.ttlen = ttlen
        self.strflag = strflag
        self.filflag = filflag
        self.mltplflag = mltplflag
        self.log_path = log_path
        self.stream = stream
        self.quiet = quiet
        self.log = ''
        self.timing = None

    def lprint(self, basestr=None, fllchar=None, cmmchar=None, NTab=None,
               ttlen=None, strflag=None, filflag=None, mltplflag=None):
        '''Print string with comment and filler.

        Parameters
        ----------
        Same as input parameters; None keeps the tracker default.

        '''
        basestr = self.basestr if basestr is None else basestr
        fllchar = self.fllchar if fllchar is None else fllchar
        cmmchar = self.cmmchar if cmmchar is None else cmmchar
        NTab = self.NTab if NTab is None else NTab
        ttlen = ttlen if ttlen else self.ttlen
        strflag = self.strflag if strflag is None else strflag
        filflag = self.filflag if filflag is None else filflag
        mltplflag = self.mltplflag if mltplflag is None else mltplflag

        # Calculate how many char are taken by decorations.
        cutchar = 0
        if cmmchar: cutchar += len(cmmchar) + 1  # '# '
        if fllchar: cutchar += 2  # ' -'
        sngltab = '  '
        tabstr = sngltab * NTab
        cutchar += len(tabstr)
        maxlen = max(ttlen - cutchar, 1)

        if basestr == 'time':
            line = self.comm_fill(strftime("%d/%m/%Y %H:%M:%S"), tabstr,
                                  cmmchar, fllchar, ttlen)
        elif len(basestr) >= maxlen and mltplflag:
            pieces = [basestr[0:maxlen]]
            rest = basestr[maxlen:]
            step = max(maxlen - len(sngltab), 1)
            pieces += [rest[i:i + step] for i in range(0, len(rest), step)]
            line = '\n'.join(
                self.comm_fill(piece, tabstr + (sngltab if i else ''),
                               cmmchar, fllchar, ttlen)
                for i, piece in enumerate(pieces))
        else:
            line = self.comm_fill(basestr[0:maxlen], tabstr, cmmchar,
                                  fllchar, ttlen)

        if not self.quiet:
            print(line, file=self.stream if self.stream else sys.stdout)
        if strflag:
            self.log = self.log + ('\n' if self.log else '') + line
        if filflag:
            folder = path.dirname(self.log_path)
            if folder and not path.isdir(folder):
                makedirs(folder)
            with open(self.log_path, 'a') as lo:
                lo.write(line + '\n')

    def comm_fill(self, basestr, tabstr, cmmchar, fllchar, ttlen):
        '''Add comment and filler to a string with defined length.

        Parameters
        ----------
        basestr: str
            Base string to print.
        tabstr: str
            Total space before the string.
        cmmchar: str
            Comment char at the beginning of the line.
        fllchar: str
            Filler char for the line.
        ttlen: int
            Maximum number of columns per line.

        '''
        basestr = (cmmchar if cmmchar else '') + \
            (' ' if basestr else '') + tabstr + basestr
        if fllchar:
            basestr = basestr + ' ' + fllchar * max(ttlen - len(basestr) - 1, 0)
        return basestr

    def section(self, title):
        '''Print a filled section header.'''
        self.lprint(title, fllchar='-', NTab=0)

    def progress(self, label, done, total, NTab=1):
        '''Print a "label: done/total" progress line.'''
        self.lprint(f'{label}: {done}/{total}', fllchar='', NTab=NTab)

    def str_out(self):
        '''Return log string as output argument.'''
        return self.log

    def str_reset(self):
        '''Reset log string.'''
        self.log = ''

    def cnvrt_sec(self, seconds):
        '''Convert seconds to days hours minutes and seconds format.

        Parameters
        ----------
        seconds: float
            Time in seconds.

        Returns
        -------
        str:
            String with day, hour, minutes, seconds.

        '''
        day = seconds // (24 * 3600)
        seconds = seconds % (24 * 3600)
        hour = seconds // 3600
        seconds %= 3600
        minutes = seconds // 60
        seconds %= 60
        return "%02d:%02d:%02d:%02d" % (day, hour, minutes, seconds)

    def start(self, what='classification'):
        '''Start logging message.'''
        self.lprint(f'Starting {what}', '+', NTab=0)
        self.lprint('time', '', NTab=0)
        self.timing = time()

    def stop(self, what='classification'):
        '''Stop logging message.'''
        self.lprint(f'End of {what}', '+', NTab=0)
        self.lprint('time', '', NTab=0)
        if self.timing:
            self.lprint('Execution time(DD:HH:MM:SS)', '+', NTab=0)
            self.lprint(self.cnvrt_sec(time() - self.timing), '', NTab=0)
        self.timing = None


#===============================================================================
# Main
#===============================================================================
if __name__ == '__main__':
    log = LogTracker(fllchar='', mltplflag=True, NTab=1, cmmchar='@INF@')
    log.start()
    log.section('Picard group')
    log.progress('ball classes', 10, 100)
    log.stop()
